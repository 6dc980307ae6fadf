"""Trial metrics: annotation precision/accuracy and head movement.

Peg transfer expects one circle marker per (non-reference) ring; the
score uses an optimal one-to-one assignment between targets and circle
centers so marker order never matters.  Thread passing expects one arrow
per consecutive hole pair, pointing at the destination hole.  Head
movement is the summed great-circle path of the raw orientation stream.
"""

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import linear_sum_assignment

from .angles import angular_distance
from .annotation import Marker, ToolKind
from .filters import GazeSample
from .tasks import TaskKind, TaskSpec

Point = Tuple[float, float]

MATCH_THRESHOLD = 0.05  # uv units, center/head distance for a hit
ARROW_ANGLE_TOL_DEG = 30.0

_INVALID_COST = 1e6  # dwarfs any sum of valid distances, never a real match


@dataclass(frozen=True)
class Score:
    """Precision is None when nothing could be matched (the +inf sentinel)."""

    precision_mean: Optional[float]
    accuracy: float


def _scorable(markers: Sequence[Marker], kind: ToolKind) -> List[Marker]:
    # Locked markers are seeded references, never user work.
    return [m for m in markers if m.kind is kind and not m.locked]


def score_peg(
    markers: Sequence[Marker],
    spec: TaskSpec,
    threshold: float = MATCH_THRESHOLD,
) -> Score:
    """Assign circle markers to ring targets, minimizing summed center distance."""
    targets = spec.targets
    circles = _scorable(markers, ToolKind.CIRCLE)
    if not targets:
        return Score(None, 0.0)
    if not circles:
        return Score(None, 0.0)
    cost = np.empty((len(targets), len(circles)))
    for i, t in enumerate(targets):
        for j, c in enumerate(circles):
            cost[i, j] = math.hypot(t[0] - c.a[0], t[1] - c.a[1])
    rows, cols = linear_sum_assignment(cost)
    dists = [float(cost[i, j]) for i, j in zip(rows, cols)]
    hits = sum(1 for d in dists if d <= threshold)
    return Score(sum(dists) / len(dists), hits / len(targets))


def _angle_between_deg(v1: Point, v2: Point) -> float:
    n1 = math.hypot(*v1)
    n2 = math.hypot(*v2)
    if n1 == 0.0 or n2 == 0.0:
        return 180.0
    cosang = (v1[0] * v2[0] + v1[1] * v2[1]) / (n1 * n2)
    return math.degrees(math.acos(max(-1.0, min(1.0, cosang))))


def score_thread(
    markers: Sequence[Marker],
    spec: TaskSpec,
    threshold: float = MATCH_THRESHOLD,
    angle_tol_deg: float = ARROW_ANGLE_TOL_DEG,
) -> Score:
    """Match arrows to consecutive hole pairs.

    An arrow is a valid candidate for pair (i -> i+1) when its head lies
    within `threshold` of hole i+1 and its tail-to-head direction is
    within `angle_tol_deg` of the hole pair direction.  A reversed arrow
    therefore never matches.  Matching maximizes matched pairs, then
    minimizes summed head distance.
    """
    holes = spec.targets
    pairs = list(zip(holes, holes[1:]))
    arrows = _scorable(markers, ToolKind.ARROW)
    if not pairs:
        return Score(None, 0.0)
    if not arrows:
        return Score(None, 0.0)
    cost = np.full((len(pairs), len(arrows)), _INVALID_COST)
    for i, (origin, dest) in enumerate(pairs):
        pair_dir = (dest[0] - origin[0], dest[1] - origin[1])
        for j, arrow in enumerate(arrows):
            head, tail = arrow.a, arrow.b
            d = math.hypot(head[0] - dest[0], head[1] - dest[1])
            if d > threshold:
                continue
            arrow_dir = (head[0] - tail[0], head[1] - tail[1])
            if _angle_between_deg(arrow_dir, pair_dir) > angle_tol_deg:
                continue
            cost[i, j] = d
    rows, cols = linear_sum_assignment(cost)
    dists = [float(cost[i, j]) for i, j in zip(rows, cols) if cost[i, j] < _INVALID_COST]
    if not dists:
        return Score(None, 0.0)
    return Score(sum(dists) / len(dists), len(dists) / len(pairs))


def score_layer(markers: Sequence[Marker], spec: TaskSpec, **kwargs) -> Score:
    if spec.kind is TaskKind.PEG_TRANSFER:
        return score_peg(markers, spec, **kwargs)
    return score_thread(markers, spec, **kwargs)


def head_path_deg(samples: Sequence[GazeSample]) -> float:
    """Total angular head travel in degrees over a sample stream."""
    if len(samples) < 1:
        raise ValueError("head_path requires at least one sample")
    total = 0.0
    for s0, s1 in zip(samples, samples[1:]):
        total += angular_distance(s0.direction, s1.direction)
    return math.degrees(total)
