"""Egocentric panel layout, ray-panel hit testing and follow-head mode.

Panels are flat rectangles facing the user, each centered `distance`
meters along its center direction.  A panel's plane is perpendicular to
that center ray, so the ray through the panel center hits uv (0.5, 0.5)
exactly and the analytic inverse (uv -> direction) is cheap.

The scene anchor is a full 3D rotation internally.  Follow-head mode
stores the head-to-anchor rotation at enable time and reapplies it every
frame, which keeps every panel rigidly fixed in the head frame; a
yaw/pitch-additive anchor cannot do that once the head path mixes yaw
and pitch.  Snapshots expose the anchor as its forward yaw/pitch.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Tuple

from .angles import (
    Direction,
    Vec3,
    cross,
    dir_to_vec,
    dot,
    normalized,
    vec_to_dir,
)

_UP: Vec3 = (0.0, 1.0, 0.0)

Mat3 = Tuple[Vec3, Vec3, Vec3]  # row-major

_IDENTITY: Mat3 = ((1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0))


def rotation_from_dir(yaw: float, pitch: float) -> Mat3:
    """Roll-free rotation taking +z to the (yaw, pitch) direction."""
    cy, sy = math.cos(yaw), math.sin(yaw)
    cp, sp = math.cos(pitch), math.sin(pitch)
    # Ryaw @ Rpitch, row-major; forward (0,0,1) maps to dir_to_vec(yaw, pitch).
    return (
        (cy, -sy * sp, sy * cp),
        (0.0, cp, sp),
        (-sy, -cy * sp, cy * cp),
    )


def mat_vec(m: Mat3, v: Vec3) -> Vec3:
    return (
        m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
        m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
        m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
    )


def mat_t_vec(m: Mat3, v: Vec3) -> Vec3:
    """Transpose-multiply: rotate `v` into the matrix's local frame."""
    return (
        m[0][0] * v[0] + m[1][0] * v[1] + m[2][0] * v[2],
        m[0][1] * v[0] + m[1][1] * v[1] + m[2][1] * v[2],
        m[0][2] * v[0] + m[1][2] * v[1] + m[2][2] * v[2],
    )


def mat_mul(a: Mat3, b: Mat3) -> Mat3:
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(3)) for j in range(3))
        for i in range(3)
    )  # type: ignore[return-value]


def mat_t_mul(a: Mat3, b: Mat3) -> Mat3:
    """a^T @ b."""
    return tuple(
        tuple(sum(a[k][i] * b[k][j] for k in range(3)) for j in range(3))
        for i in range(3)
    )  # type: ignore[return-value]


class PanelKind(Enum):
    VIDEO = "video"
    IMAGE = "image"
    HELP_LEFT = "help_left"
    HELP_RIGHT = "help_right"


@dataclass
class Panel:
    id: str
    kind: PanelKind
    center_dir: Direction  # relative to the scene anchor
    width: float  # meters
    height: float  # meters
    distance: float = 1.5
    interactive: bool = True

    def __post_init__(self) -> None:
        if self.width <= 0 or self.height <= 0 or self.distance <= 0:
            raise ValueError(f"panel {self.id}: dimensions must be positive")
        # Help panels are content-only surfaces.
        if self.kind in (PanelKind.HELP_LEFT, PanelKind.HELP_RIGHT):
            self.interactive = False

    @property
    def aspect(self) -> float:
        return self.width / self.height

    def local_frame(self) -> Tuple[Vec3, Vec3, Vec3, Vec3]:
        """(center point, normal, u axis, v axis) in the anchor frame.

        v points downward so v grows downward, matching screen space.
        Degenerates at pitch +-90 deg; panel pitches stay well inside.
        """
        n = dir_to_vec(*self.center_dir)
        c = cross(_UP, n)
        if dot(c, c) < 1e-18:
            u_axis: Vec3 = (1.0, 0.0, 0.0)
        else:
            u_axis = normalized(c)
        up_axis = cross(n, u_axis)
        v_axis = (-up_axis[0], -up_axis[1], -up_axis[2])
        center = (n[0] * self.distance, n[1] * self.distance, n[2] * self.distance)
        return center, n, u_axis, v_axis


@dataclass(frozen=True)
class PanelHit:
    panel_id: str
    kind: PanelKind
    u: float  # [0,1], rightward
    v: float  # [0,1], downward

    @property
    def uv(self) -> Tuple[float, float]:
        return (self.u, self.v)


def _angular_size_m(angle_deg: float, distance: float) -> float:
    return 2.0 * distance * math.tan(math.radians(angle_deg) / 2.0)


@dataclass
class Scene:
    """Panel set hung from a world anchor rotation.

    Mutated only on the engine tick; readers get immutable snapshots.
    """

    panels: List[Panel] = field(default_factory=list)
    anchor_rot: Mat3 = _IDENTITY
    follow_mode: bool = False
    _follow_offset: Mat3 = _IDENTITY

    @property
    def anchor(self) -> Direction:
        """Anchor forward direction as (yaw, pitch)."""
        return vec_to_dir(mat_vec(self.anchor_rot, (0.0, 0.0, 1.0)))

    def validate(self) -> None:
        """Check layout invariants: exactly one video and one image panel."""
        for kind in (PanelKind.VIDEO, PanelKind.IMAGE):
            n = sum(1 for p in self.panels if p.kind == kind)
            if n != 1:
                raise ValueError(f"scene needs exactly one {kind.value} panel, has {n}")

    def panel(self, panel_id: str) -> Panel:
        for p in self.panels:
            if p.id == panel_id:
                return p
        raise KeyError(panel_id)

    def panel_by_kind(self, kind: PanelKind) -> Panel:
        for p in self.panels:
            if p.kind == kind:
                return p
        raise KeyError(kind)

    def world_dir(self, panel: Panel) -> Direction:
        """Panel center direction in the world frame."""
        return vec_to_dir(mat_vec(self.anchor_rot, dir_to_vec(*panel.center_dir)))

    def _world_frame(self, panel: Panel) -> Tuple[Vec3, Vec3, Vec3]:
        center, _n, u_axis, v_axis = panel.local_frame()
        return (
            mat_vec(self.anchor_rot, center),
            mat_vec(self.anchor_rot, u_axis),
            mat_vec(self.anchor_rot, v_axis),
        )

    def ray_hit(self, direction: Direction) -> Optional[PanelHit]:
        """Intersect the view ray with every panel; nearest in-rectangle hit wins."""
        # Work in the anchor frame: rotate the ray instead of every panel.
        d = mat_t_vec(self.anchor_rot, dir_to_vec(*direction))
        best: Optional[PanelHit] = None
        best_t = math.inf
        for panel in self.panels:
            center, n, u_axis, v_axis = panel.local_frame()
            denom = dot(d, n)
            if denom <= 1e-12:
                continue
            t = panel.distance / denom
            if t <= 0.0 or t >= best_t:
                continue
            p = (d[0] * t, d[1] * t, d[2] * t)
            rel = (p[0] - center[0], p[1] - center[1], p[2] - center[2])
            lu = dot(rel, u_axis)
            lv = dot(rel, v_axis)
            if abs(lu) <= panel.width / 2.0 and abs(lv) <= panel.height / 2.0:
                best_t = t
                best = PanelHit(
                    panel.id, panel.kind, 0.5 + lu / panel.width, 0.5 + lv / panel.height
                )
        return best

    def uv_to_dir(self, panel_id: str, u: float, v: float) -> Direction:
        """Analytic inverse of ray_hit for a point on a given panel."""
        panel = self.panel(panel_id)
        center, _n, u_axis, v_axis = panel.local_frame()
        lu = (u - 0.5) * panel.width
        lv = (v - 0.5) * panel.height
        p = (
            center[0] + lu * u_axis[0] + lv * v_axis[0],
            center[1] + lu * u_axis[1] + lv * v_axis[1],
            center[2] + lu * u_axis[2] + lv * v_axis[2],
        )
        return vec_to_dir(mat_vec(self.anchor_rot, p))

    def set_follow(self, on: bool, head_dir: Direction) -> None:
        """Toggle follow-head mode.

        Enabling stores the head-to-anchor rotation; `update_head` then
        reapplies it every frame so panels stay rigid in the head frame.
        Disabling freezes the anchor at its current world orientation.
        """
        if on and not self.follow_mode:
            head = rotation_from_dir(*head_dir)
            self._follow_offset = mat_t_mul(head, self.anchor_rot)
        self.follow_mode = on

    def update_head(self, head_dir: Direction) -> None:
        """Per-frame anchor update; no-op unless follow mode is on."""
        if self.follow_mode:
            head = rotation_from_dir(*head_dir)
            self.anchor_rot = mat_mul(head, self._follow_offset)


# Default angular footprint, degrees.  The video panel fits inside the
# narrow (~30 deg) display window of a first-generation AR headset; the
# image panel sits right below it and the two help panels to the right.
DEFAULT_VIDEO_DEG = (28.0, 18.0)
DEFAULT_IMAGE_DEG = (28.0, 12.0)
DEFAULT_HELP_DEG = (12.0, 18.0)
DEFAULT_DISTANCE = 1.5
DEFAULT_GAP_DEG = 1.0


def layout_default(
    video_deg: Tuple[float, float] = DEFAULT_VIDEO_DEG,
    image_deg: Tuple[float, float] = DEFAULT_IMAGE_DEG,
    help_deg: Tuple[float, float] = DEFAULT_HELP_DEG,
    distance: float = DEFAULT_DISTANCE,
    gap_deg: float = DEFAULT_GAP_DEG,
) -> Scene:
    """Build the default egocentric layout.

    Video panel dead ahead, image panel directly below it, both help
    panels stacked to the right; everything at the same viewing distance.
    """

    def size_m(deg: Tuple[float, float]) -> Tuple[float, float]:
        return (_angular_size_m(deg[0], distance), _angular_size_m(deg[1], distance))

    vw, vh = size_m(video_deg)
    iw, ih = size_m(image_deg)
    hw, hh = size_m(help_deg)

    image_pitch = -math.radians(video_deg[1] / 2 + gap_deg + image_deg[1] / 2)
    help_inner_yaw = math.radians(video_deg[0] / 2 + gap_deg + help_deg[0] / 2)
    help_outer_yaw = help_inner_yaw + math.radians(help_deg[0] + gap_deg)

    panels = [
        Panel("video", PanelKind.VIDEO, (0.0, 0.0), vw, vh, distance),
        Panel("image", PanelKind.IMAGE, (0.0, image_pitch), iw, ih, distance),
        Panel(
            "help_left",
            PanelKind.HELP_LEFT,
            (help_inner_yaw, 0.0),
            hw,
            hh,
            distance,
            interactive=False,
        ),
        Panel(
            "help_right",
            PanelKind.HELP_RIGHT,
            (help_outer_yaw, 0.0),
            hw,
            hh,
            distance,
            interactive=False,
        ),
    ]
    return Scene(panels=panels)
