"""Virtual control regions on the interactive panels.

All regions are expressed in panel uv ([0,1]^2, v downward) so the
headless engine and the browser UI resolve presses identically.  The
video panel keeps a button strip along its bottom edge and hosts the
circular four-slice tool menu while it is open; the image panel has a
top strip (back / page buttons) above the 3x3 grid or full image.
"""

import math
from enum import Enum
from typing import Optional, Tuple

from .annotation import MENU_OPTIONS, ToolKind
from .browser import BrowserMode, GRID_COLS, GRID_ROWS

# -- video panel --------------------------------------------------------------

VIDEO_STRIP_V = 0.90  # v >= this is the control strip


class VideoControl(Enum):
    MENU = "menu"
    CLEAR_MARKERS = "clear_markers"
    CLEAR_SKETCH = "clear_sketch"
    SCREENSHOT = "screenshot"


_VIDEO_BUTTONS = (
    VideoControl.MENU,
    VideoControl.CLEAR_MARKERS,
    VideoControl.CLEAR_SKETCH,
    VideoControl.SCREENSHOT,
)


def video_control_at(u: float, v: float) -> Optional[VideoControl]:
    """Button under a press in the bottom strip, None in the drawing area."""
    if v < VIDEO_STRIP_V:
        return None
    slot = min(int(u * len(_VIDEO_BUTTONS)), len(_VIDEO_BUTTONS) - 1)
    return _VIDEO_BUTTONS[slot]


def video_control_center(control: VideoControl) -> Tuple[float, float]:
    slot = _VIDEO_BUTTONS.index(control)
    width = 1.0 / len(_VIDEO_BUTTONS)
    return ((slot + 0.5) * width, (VIDEO_STRIP_V + 1.0) / 2.0)


# -- tool menu ----------------------------------------------------------------

# Menu center in panel uv; radius in aspect-corrected units so the menu is
# circular on screen.  Slices clockwise from up: line, arrow, circle, sketch.
MENU_CENTER_UV = (0.5, 0.45)
MENU_RADIUS = 0.18


def menu_slice_at(u: float, v: float, aspect: float) -> Optional[ToolKind]:
    """Tool option under a press while the menu is open; None cancels."""
    dx = (u - MENU_CENTER_UV[0]) * aspect
    dy = v - MENU_CENTER_UV[1]
    if math.hypot(dx, dy) > MENU_RADIUS:
        return None
    angle = math.degrees(math.atan2(dx, -dy))  # 0 = up, 90 = right
    slot = int(round(angle / 90.0)) % 4
    return MENU_OPTIONS[slot]


def menu_slice_press_uv(kind: ToolKind, aspect: float) -> Tuple[float, float]:
    """A panel-uv point safely inside the given menu slice."""
    slot = MENU_OPTIONS.index(kind)
    angle = math.radians(slot * 90.0)
    r = MENU_RADIUS * 0.6
    du = r * math.sin(angle) / aspect
    dv = -r * math.cos(angle)
    return (MENU_CENTER_UV[0] + du, MENU_CENTER_UV[1] + dv)


# -- image panel --------------------------------------------------------------

IMAGE_STRIP_V = 0.12  # v <= this is the top control strip
IMAGE_CONTENT_V0 = 0.15  # content (grid or full image) starts here


class ImageControl(Enum):
    BACK = "back"
    PAGE_PREV = "page_prev"
    PAGE_NEXT = "page_next"
    CELL = "cell"  # carries a grid slot
    CONTENT = "content"  # the full-size image itself


def image_control_at(
    u: float, v: float, mode: BrowserMode
) -> Tuple[Optional[ImageControl], int]:
    """Resolve a press on the image panel to (control, grid slot)."""
    if v <= IMAGE_STRIP_V:
        if u <= 0.25 and mode is not BrowserMode.FOLDER_GRID:
            return ImageControl.BACK, 0
        if mode is not BrowserMode.FULL_IMAGE:
            if 0.5 <= u < 0.75:
                return ImageControl.PAGE_PREV, 0
            if u >= 0.75:
                return ImageControl.PAGE_NEXT, 0
        return None, 0
    if v < IMAGE_CONTENT_V0:
        return None, 0
    if mode is BrowserMode.FULL_IMAGE:
        return ImageControl.CONTENT, 0
    col = min(int(u * GRID_COLS), GRID_COLS - 1)
    row = min(
        int((v - IMAGE_CONTENT_V0) / (1.0 - IMAGE_CONTENT_V0) * GRID_ROWS),
        GRID_ROWS - 1,
    )
    return ImageControl.CELL, row * GRID_COLS + col


def grid_cell_center(slot: int) -> Tuple[float, float]:
    row, col = divmod(slot, GRID_COLS)
    u = (col + 0.5) / GRID_COLS
    v = IMAGE_CONTENT_V0 + (row + 0.5) / GRID_ROWS * (1.0 - IMAGE_CONTENT_V0)
    return (u, v)


def image_strip_center(control: ImageControl) -> Tuple[float, float]:
    v = IMAGE_STRIP_V / 2.0
    if control is ImageControl.BACK:
        return (0.125, v)
    if control is ImageControl.PAGE_PREV:
        return (0.625, v)
    if control is ImageControl.PAGE_NEXT:
        return (0.875, v)
    return (0.5, (IMAGE_CONTENT_V0 + 1.0) / 2.0)
