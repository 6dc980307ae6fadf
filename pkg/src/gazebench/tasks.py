"""Training-task generation: peg transfer and thread passing problems.

A problem is a seeded random placement of targets on the video panel:
ring positions for peg transfer (one extra ring is the green reference,
pre-marked and excluded from scoring) or an ordered hole sequence for
thread passing.  Difficulty scales with target count.  Each task renders
its solution sheet images into the image-panel folder for its level.

Coordinates are aspect-corrected video-panel units (u in [0, aspect],
v in [0, 1]), the same space the annotation layer uses.
"""

import math
import random
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import List, Optional, Tuple

from .scene import DEFAULT_VIDEO_DEG

Point = Tuple[float, float]


class TaskKind(Enum):
    PEG_TRANSFER = "peg_transfer"
    THREAD_PASSING = "thread_passing"


class Level(Enum):
    EASY = "easy"
    MEDIUM = "medium"
    HARD = "hard"


# Targets per difficulty level. Peg counts exclude the green reference ring.
PEG_RING_COUNTS = {Level.EASY: 4, Level.MEDIUM: 6, Level.HARD: 8}
THREAD_HOLE_COUNTS = {Level.EASY: 3, Level.MEDIUM: 5, Level.HARD: 7}

MIN_TARGET_SPACING = 0.08
PLACEMENT_ATTEMPTS = 10_000

# Keep targets away from panel edges and clear of the bottom control strip.
_MARGIN = 0.12
_V_MAX = 0.82

RING_RADIUS = 0.04  # drawn ring radius, also the seeded reference circle


def default_video_aspect() -> float:
    w, h = DEFAULT_VIDEO_DEG
    return math.tan(math.radians(w) / 2.0) / math.tan(math.radians(h) / 2.0)


class PlacementError(RuntimeError):
    """Could not satisfy the spacing constraint within the attempt budget."""


@dataclass(frozen=True)
class TaskSpec:
    kind: TaskKind
    level: Level
    seed: int
    targets: Tuple[Point, ...]  # scored targets: rings (peg) or ordered holes (thread)
    green_ring: Optional[Point] = None  # peg only: the pre-marked reference
    folder_name: str = ""
    solution_images: Tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "level": self.level.value,
            "seed": self.seed,
            "targets": [list(p) for p in self.targets],
            "green_ring": list(self.green_ring) if self.green_ring else None,
            "folder_name": self.folder_name,
            "solution_images": list(self.solution_images),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TaskSpec":
        return cls(
            kind=TaskKind(d["kind"]),
            level=Level(d["level"]),
            seed=int(d["seed"]),
            targets=tuple(tuple(p) for p in d["targets"]),
            green_ring=tuple(d["green_ring"]) if d.get("green_ring") else None,
            folder_name=d.get("folder_name", ""),
            solution_images=tuple(d.get("solution_images", ())),
        )


def _place_points(
    count: int, rng: random.Random, aspect: float, min_spacing: float
) -> List[Point]:
    points: List[Point] = []
    for _ in range(count):
        for _attempt in range(PLACEMENT_ATTEMPTS):
            p = (
                rng.uniform(_MARGIN, aspect - _MARGIN),
                rng.uniform(_MARGIN, _V_MAX),
            )
            if all(math.hypot(p[0] - q[0], p[1] - q[1]) >= min_spacing for q in points):
                points.append(p)
                break
        else:
            raise PlacementError(
                f"no room for point {len(points) + 1}/{count} after "
                f"{PLACEMENT_ATTEMPTS} attempts"
            )
    return points


def generate_task(
    kind: TaskKind,
    level: Level,
    seed: int,
    aspect: Optional[float] = None,
    image_root: Optional[Path] = None,
    counts: Optional[dict] = None,
) -> TaskSpec:
    """Build a deterministic problem for (kind, level, seed).

    When `image_root` is given, the solution sheet is rendered into
    `<image_root>/<kind>-<level>/` and the file paths recorded on the returned task.
    """
    aspect = aspect if aspect is not None else default_video_aspect()
    # str seeds hash deterministically across processes (unlike tuples).
    rng = random.Random(f"{kind.value}:{level.value}:{seed}")
    folder = f"{kind.value}-{level.value}"

    if kind is TaskKind.PEG_TRANSFER:
        n = (counts or PEG_RING_COUNTS)[level]
        points = _place_points(n + 1, rng, aspect, MIN_TARGET_SPACING)
        green_index = rng.randrange(n + 1)
        green = points.pop(green_index)
        spec = TaskSpec(kind, level, seed, tuple(points), green, folder)
    else:
        n = (counts or THREAD_HOLE_COUNTS)[level]
        points = _place_points(n, rng, aspect, MIN_TARGET_SPACING)
        spec = TaskSpec(kind, level, seed, tuple(points), None, folder)

    if image_root is not None:
        paths = render_solution_images(spec, Path(image_root), aspect)
        spec = TaskSpec(
            kind, level, seed, spec.targets, spec.green_ring, folder, tuple(paths)
        )
    return spec


# -- solution sheets ------------------------------------------------------------

_IMG_H = 480
_RING_COLOR = (235, 120, 40)
_GREEN = (60, 200, 80)
_HOLE_COLOR = (90, 150, 235)
_BG = (24, 26, 30)


def _px(p: Point, aspect: float, w: int, h: int) -> Tuple[float, float]:
    return (p[0] / aspect * (w - 1), p[1] * (h - 1))


def render_solution_images(spec: TaskSpec, image_root: Path, aspect: float) -> List[str]:
    """Draw the problem's solution sheet(s) as PNG files; returns the paths."""
    from PIL import Image, ImageDraw

    w = round(_IMG_H * aspect)
    folder = image_root / spec.folder_name
    folder.mkdir(parents=True, exist_ok=True)
    img = Image.new("RGB", (w, _IMG_H), _BG)
    draw = ImageDraw.Draw(img)
    rpx = RING_RADIUS / 1.0 * (_IMG_H - 1)

    if spec.kind is TaskKind.PEG_TRANSFER:
        for p in spec.targets:
            x, y = _px(p, aspect, w, _IMG_H)
            draw.ellipse([x - rpx, y - rpx, x + rpx, y + rpx], outline=_RING_COLOR, width=4)
        if spec.green_ring is not None:
            x, y = _px(spec.green_ring, aspect, w, _IMG_H)
            draw.ellipse([x - rpx, y - rpx, x + rpx, y + rpx], outline=_GREEN, width=5)
    else:
        pts = [_px(p, aspect, w, _IMG_H) for p in spec.targets]
        for i, (x, y) in enumerate(pts):
            draw.ellipse([x - 8, y - 8, x + 8, y + 8], fill=_HOLE_COLOR)
            draw.text((x + 10, y - 18), str(i + 1), fill=(230, 230, 230))
        for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
            draw.line([x0, y0, x1, y1], fill=(200, 200, 200), width=2)
            # Small arrowhead at the destination hole.
            ang = math.atan2(y1 - y0, x1 - x0)
            for s in (1, -1):
                bx = x1 - 14 * math.cos(ang + s * 0.5)
                by = y1 - 14 * math.sin(ang + s * 0.5)
                draw.line([x1, y1, bx, by], fill=(200, 200, 200), width=2)

    path = folder / f"solution_seed{spec.seed}.png"
    img.save(path)
    return [str(path)]
