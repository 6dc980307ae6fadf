"""Angle and direction helpers shared by the filter, scene and metric code.

Directions are (yaw, pitch) pairs in radians: yaw grows left-to-right,
pitch grows downward-to-upward.  The implied 3D frame is x-right, y-up,
z-forward, so (0, 0) looks straight ahead along +z.
"""

import math
from typing import Iterable, Tuple

Direction = Tuple[float, float]
Vec3 = Tuple[float, float, float]

TWO_PI = 2.0 * math.pi
HALF_PI = 0.5 * math.pi


def wrap_angle(a: float) -> float:
    """Wrap an angle into (-pi, pi]."""
    a = math.fmod(a, TWO_PI)
    if a <= -math.pi:
        a += TWO_PI
    elif a > math.pi:
        a -= TWO_PI
    return a


def clamp(x: float, lo: float, hi: float) -> float:
    return lo if x < lo else hi if x > hi else x


def clamp_pitch(p: float) -> float:
    return clamp(p, -HALF_PI, HALF_PI)


def dir_to_vec(yaw: float, pitch: float) -> Vec3:
    cp = math.cos(pitch)
    return (math.sin(yaw) * cp, math.sin(pitch), math.cos(yaw) * cp)


def vec_to_dir(v: Vec3) -> Direction:
    x, y, z = v
    n = math.sqrt(x * x + y * y + z * z)
    if n == 0.0:
        raise ValueError("zero-length direction vector")
    return (math.atan2(x, z), math.asin(clamp(y / n, -1.0, 1.0)))


def dot(a: Vec3, b: Vec3) -> float:
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def cross(a: Vec3, b: Vec3) -> Vec3:
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def norm(a: Vec3) -> float:
    return math.sqrt(dot(a, a))


def normalized(a: Vec3) -> Vec3:
    n = norm(a)
    if n == 0.0:
        raise ValueError("cannot normalize zero vector")
    return (a[0] / n, a[1] / n, a[2] / n)


def scaled(a: Vec3, s: float) -> Vec3:
    return (a[0] * s, a[1] * s, a[2] * s)


def angular_distance(d1: Direction, d2: Direction) -> float:
    """Great-circle angle in radians between two (yaw, pitch) directions.

    Uses atan2(|cross|, dot), which stays accurate for both tiny and
    near-antipodal separations.
    """
    a = dir_to_vec(*d1)
    b = dir_to_vec(*d2)
    c = cross(a, b)
    return math.atan2(norm(c), dot(a, b))


def circular_mean(angles: Iterable[float]) -> float:
    """Mean of angles via the summed sin/cos components; survives the +-pi seam."""
    s = c = 0.0
    n = 0
    for a in angles:
        s += math.sin(a)
        c += math.cos(a)
        n += 1
    if n == 0:
        raise ValueError("circular_mean of empty sequence")
    return math.atan2(s / n, c / n)
