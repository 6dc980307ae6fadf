"""Physical input bridge: serial frame parsing, debounce, gaze-context routing.

The two-button devices (finger ring, foot pedals) speak an ASCII line
protocol over 115200-baud serial: "L1", "L0", "R1", "R0", one frame per
newline, where 1 is a press and 0 a release.  Anything else is noise,
counted and dropped.  Both devices carry the same two buttons, so a
parsed event stream is device-agnostic apart from its `source` tag.
"""

import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .annotation import DraggingCreate, DraggingEdit, MenuOpen, Sketching, ToolState
from .browser import BrowserMode, GRID_PAGE_SIZE
from .controls import (
    ImageControl,
    VideoControl,
    image_control_at,
    menu_slice_at,
    video_control_at,
)
from .scene import PanelHit, PanelKind

log = logging.getLogger(__name__)

DEFAULT_DEBOUNCE_MS = 20.0
_MAX_LINE_BYTES = 64


class Side(Enum):
    LEFT = "left"
    RIGHT = "right"


class EdgeKind(Enum):
    PRESS = "press"
    RELEASE = "release"


class Source(Enum):
    RING = "ring"
    PEDAL = "pedal"
    KEYBOARD = "keyboard"
    REMOTE = "remote"


@dataclass(frozen=True)
class InputEvent:
    t: float  # ms
    side: Side
    edge: EdgeKind
    source: Source

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "side": self.side.value,
            "edge": self.edge.value,
            "source": self.source.value,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "InputEvent":
        return cls(
            t=float(d["t"]),
            side=Side(d["side"]),
            edge=EdgeKind(d["edge"]),
            source=Source(d["source"]),
        )


_FRAMES = {
    b"L1": (Side.LEFT, EdgeKind.PRESS),
    b"L0": (Side.LEFT, EdgeKind.RELEASE),
    b"R1": (Side.RIGHT, EdgeKind.PRESS),
    b"R0": (Side.RIGHT, EdgeKind.RELEASE),
}


class SerialParser:
    """Incremental line scanner for the button wire protocol.

    Feed arbitrary byte chunks; valid frames come out as events stamped
    with the feed time.  Malformed lines bump `noise_count` and are
    skipped without corrupting subsequent frames.  Overlong garbage
    between newlines is bounded by `_MAX_LINE_BYTES`.
    """

    def __init__(self, source: Source = Source.RING) -> None:
        self.source = source
        self.noise_count = 0
        self._buf = bytearray()
        self._discarding = False

    def feed(self, data: bytes, t: float = 0.0) -> List[InputEvent]:
        events: List[InputEvent] = []
        for byte in data:
            if byte == 0x0A:  # newline terminates a frame
                if self._discarding:
                    self._discarding = False
                    self.noise_count += 1
                else:
                    self._finish_line(events, t)
                self._buf.clear()
                continue
            if self._discarding:
                continue
            self._buf.append(byte)
            if len(self._buf) > _MAX_LINE_BYTES:
                self._buf.clear()
                self._discarding = True
        return events

    def _finish_line(self, events: List[InputEvent], t: float) -> None:
        line = bytes(self._buf).rstrip(b"\r")
        if not line:
            return  # blank lines are not counted as noise
        mapped = _FRAMES.get(line)
        if mapped is None:
            self.noise_count += 1
            return
        side, edge = mapped
        events.append(InputEvent(t=t, side=side, edge=edge, source=self.source))


class EdgeDebouncer:
    """Per-side contact debounce plus strict press/release alternation.

    An edge is dropped if it repeats the last accepted edge on its side,
    or if it lands within `window_ms` of the previously accepted edge on
    that side.  Buttons are assumed released at start of stream.
    """

    def __init__(self, window_ms: float = DEFAULT_DEBOUNCE_MS) -> None:
        if window_ms < 0:
            raise ValueError("debounce window must be >= 0")
        self.window_ms = window_ms
        self._last_edge: Dict[Side, EdgeKind] = {
            Side.LEFT: EdgeKind.RELEASE,
            Side.RIGHT: EdgeKind.RELEASE,
        }
        self._last_t: Dict[Side, Optional[float]] = {Side.LEFT: None, Side.RIGHT: None}

    def accept(self, event: InputEvent) -> bool:
        if event.edge == self._last_edge[event.side]:
            return False
        last_t = self._last_t[event.side]
        if last_t is not None and event.t - last_t < self.window_ms:
            return False
        self._last_edge[event.side] = event.edge
        self._last_t[event.side] = event.t
        return True

    def is_pressed(self, side: Side) -> bool:
        return self._last_edge[side] is EdgeKind.PRESS


def debounce(
    events: Sequence[InputEvent], window_ms: float = DEFAULT_DEBOUNCE_MS
) -> List[InputEvent]:
    """Filter an event list through a fresh debouncer."""
    deb = EdgeDebouncer(window_ms)
    return [e for e in events if deb.accept(e)]


# -- routing ------------------------------------------------------------------


@dataclass(frozen=True)
class GazeContext:
    """Atomic snapshot of everything a button event is resolved against."""

    hit: Optional[PanelHit]
    tool_state: ToolState
    browser_mode: BrowserMode
    grid_page: int
    video_aspect: float
    video_point: Tuple[float, float]  # last aspect-corrected point on the video panel


@dataclass(frozen=True)
class Action:
    """One routed engine action; `name` selects the handler, `args` its payload."""

    name: str
    args: Tuple[Any, ...] = ()


def _noop(reason: str) -> Action:
    return Action("noop", (reason,))


_VIDEO_CONTROL_ACTIONS = {
    VideoControl.MENU: "menu_open",
    VideoControl.CLEAR_MARKERS: "clear_markers",
    VideoControl.CLEAR_SKETCH: "clear_sketch",
    VideoControl.SCREENSHOT: "screenshot",
}


def route(event: InputEvent, ctx: GazeContext) -> Action:
    """Map one debounced button edge to an engine action.

    Pure function of (event, context snapshot): identical streams from
    ring and pedal sources route identically, and replays are exact.
    """
    dragging = isinstance(ctx.tool_state, (DraggingCreate, DraggingEdit, Sketching))

    if event.side is Side.LEFT:
        # A release always terminates an active drag, even off-panel.
        if event.edge is EdgeKind.RELEASE:
            if dragging:
                point = _video_point(ctx)
                return Action("annotation_release", (point,))
            return _noop("release outside drag")
        return _route_left_press(ctx, dragging)

    # Right button.
    if event.edge is not EdgeKind.PRESS:
        return _noop("right release")
    if ctx.hit is None:
        return _noop("no panel under reticle")
    if ctx.hit.kind is PanelKind.VIDEO:
        return Action("follow_toggle")
    if ctx.hit.kind is PanelKind.IMAGE and ctx.browser_mode is BrowserMode.FULL_IMAGE:
        control, _ = image_control_at(ctx.hit.u, ctx.hit.v, ctx.browser_mode)
        if control is ImageControl.CONTENT:
            return Action("browser_next")
    return _noop("right press has no binding here")


def _route_left_press(ctx: GazeContext, dragging: bool) -> Action:
    if ctx.hit is None:
        return _noop("no panel under reticle")
    kind = ctx.hit.kind
    u, v = ctx.hit.u, ctx.hit.v

    if kind is PanelKind.VIDEO:
        if isinstance(ctx.tool_state, MenuOpen):
            choice = menu_slice_at(u, v, ctx.video_aspect)
            if choice is None:
                return Action("menu_close")
            return Action("menu_choose", (choice,))
        control = video_control_at(u, v)
        if control is not None and not dragging:
            return Action(_VIDEO_CONTROL_ACTIONS[control])
        return Action("annotation_press", (_video_point(ctx),))

    if kind is PanelKind.IMAGE:
        control, slot = image_control_at(u, v, ctx.browser_mode)
        if control is ImageControl.BACK:
            return Action("browser_back")
        if control is ImageControl.PAGE_PREV:
            return Action("browser_prev")
        if control is ImageControl.PAGE_NEXT:
            return Action("browser_next")
        if control is ImageControl.CONTENT:
            return Action("browser_prev")  # left button pages to the previous image
        if control is ImageControl.CELL:
            position = ctx.grid_page * GRID_PAGE_SIZE + slot
            if ctx.browser_mode is BrowserMode.FOLDER_GRID:
                return Action("browser_select_folder", (position,))
            return Action("browser_select_image", (position,))
        return _noop("image panel strip gap")

    return _noop("help panels are view-only")


def _video_point(ctx: GazeContext) -> Tuple[float, float]:
    """Aspect-corrected annotation point for the event's context.

    Uses the live hit when the reticle is on the video panel, otherwise
    the last known on-panel point (drags may end off-panel).
    """
    if ctx.hit is not None and ctx.hit.kind is PanelKind.VIDEO:
        return (ctx.hit.u * ctx.video_aspect, ctx.hit.v)
    return ctx.video_point
