"""Deterministic rasterization of annotation layers onto frame buffers.

Dense parametric sampling with pixel dedup, so two calls on the same
layer always touch the same pixels.  Coordinates arrive in
aspect-corrected units (u in [0, aspect], v in [0, 1]); the vertical
frame extent maps to one corrected unit.  Circles render round only when
the frame aspect matches the panel aspect.
"""

import math
from typing import Iterable, List, Sequence, Set, Tuple

import numpy as np

from .annotation import Marker, SketchStroke, ToolKind

Pixel = Tuple[int, int]


def _round_half_up(x: float) -> int:
    # Banker's rounding would collapse adjacent half-integer coordinates
    # (panel centers map to .5 pixel positions) onto even pixels.
    return int(math.floor(x + 0.5))

MARKER_COLOR = (230, 40, 40)
SKETCH_COLOR = (240, 220, 60)

# Arrowhead barbs: fraction of shaft length, half-angle off the shaft.
ARROW_BARB_FRACTION = 0.25
ARROW_BARB_ANGLE = math.radians(30.0)


def _to_px(point, w: int, h: int, aspect: float) -> Tuple[float, float]:
    u, v = point
    return (u / aspect) * (w - 1), v * (h - 1)


def _segment_pixels(p0, p1, w: int, h: int) -> Iterable[Pixel]:
    """DDA segment plot: one pixel per major-axis step."""
    dx = p1[0] - p0[0]
    dy = p1[1] - p0[1]
    steps = max(1, int(math.ceil(max(abs(dx), abs(dy)))))
    for i in range(steps + 1):
        t = i / steps
        x = _round_half_up(p0[0] + t * dx)
        y = _round_half_up(p0[1] + t * dy)
        if 0 <= x < w and 0 <= y < h:
            yield (x, y)


def circle_rim_pixels(cx: float, cy: float, radius_px: float, w: int, h: int) -> Set[Pixel]:
    """Thin circle rim via the sqrt column/row scan.

    Marks the rounded upper/lower arc pixel for every column across the
    circle and the left/right arc pixel for every row, giving the classic
    one-pixel-wide rim.
    """
    pixels: Set[Pixel] = set()
    if radius_px <= 0:
        return pixels
    r2 = radius_px * radius_px

    def put(xi: int, yi: int) -> None:
        if 0 <= xi < w and 0 <= yi < h:
            pixels.add((xi, yi))

    # Walk integer pixel columns, marking the rounded upper/lower arc
    # pixel in each; then the same over rows for the steep flanks.
    for xi in range(int(math.ceil(cx - radius_px)), int(math.floor(cx + radius_px)) + 1):
        dy = math.sqrt(max(0.0, r2 - (xi - cx) ** 2))
        put(xi, _round_half_up(cy + dy))
        put(xi, _round_half_up(cy - dy))
    for yi in range(int(math.ceil(cy - radius_px)), int(math.floor(cy + radius_px)) + 1):
        dx = math.sqrt(max(0.0, r2 - (yi - cy) ** 2))
        put(_round_half_up(cx + dx), yi)
        put(_round_half_up(cx - dx), yi)
    return pixels


def marker_pixels(marker: Marker, w: int, h: int, aspect: float) -> Set[Pixel]:
    a = _to_px(marker.a, w, h, aspect)
    b = _to_px(marker.b, w, h, aspect)
    pixels: Set[Pixel] = set()
    if marker.kind is ToolKind.CIRCLE:
        radius_px = math.hypot(b[0] - a[0], b[1] - a[1])
        pixels |= circle_rim_pixels(a[0], a[1], radius_px, w, h)
    else:
        pixels.update(_segment_pixels(a, b, w, h))
        if marker.kind is ToolKind.ARROW:
            # Barbs fan back from the head along the shaft direction.
            shaft = math.atan2(b[1] - a[1], b[0] - a[0])
            barb_len = ARROW_BARB_FRACTION * math.hypot(b[0] - a[0], b[1] - a[1])
            for sign in (1.0, -1.0):
                ang = shaft + sign * ARROW_BARB_ANGLE
                tip = (a[0] + barb_len * math.cos(ang), a[1] + barb_len * math.sin(ang))
                pixels.update(_segment_pixels(a, tip, w, h))
    return pixels


def stroke_pixels(stroke: SketchStroke, w: int, h: int, aspect: float) -> Set[Pixel]:
    pixels: Set[Pixel] = set()
    pts = [_to_px(p, w, h, aspect) for p in stroke.points]
    for p0, p1 in zip(pts, pts[1:]):
        pixels.update(_segment_pixels(p0, p1, w, h))
    return pixels


def rasterize_layer(
    frame: np.ndarray,
    markers: Sequence[Marker],
    strokes: Sequence[SketchStroke],
    aspect: float,
) -> np.ndarray:
    """Draw markers and strokes over a copy of `frame` and return it."""
    out = np.array(frame, copy=True)
    h, w = out.shape[:2]
    color = out.ndim == 3

    def paint(pixels: Set[Pixel], rgb) -> None:
        for x, y in pixels:
            if color:
                out[y, x, :3] = rgb
            else:
                out[y, x] = max(rgb)

    for m in markers:
        paint(marker_pixels(m, w, h, aspect), MARKER_COLOR)
    for s in strokes:
        paint(stroke_pixels(s, w, h, aspect), SKETCH_COLOR)
    return out
