"""Annotation tools over the video panel: markers, free sketch, screenshots.

Marker and stroke coordinates live in aspect-corrected video-panel
space: u in [0, aspect], v in [0, 1], so Euclidean distances are
isotropic on screen and circles stay round.  Callers convert a raw panel
hit (u, v) to (u * aspect, v) before handing points to this module.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple, Union

log = logging.getLogger(__name__)

Point = Tuple[float, float]

# Handle pick radius, zero-length discard and sketch point spacing, all in
# aspect-corrected units (1.0 == panel height).
PICK_RADIUS = 0.02
ZERO_LENGTH_EPS = 0.005
SKETCH_MIN_SPACING = 0.004


class ToolStateError(RuntimeError):
    """An operation was applied in a tool state that does not accept it."""


class ToolKind(Enum):
    LINE = "line"
    ARROW = "arrow"
    CIRCLE = "circle"
    SKETCH = "sketch"


# The circular menu offers exactly these four options.
MENU_OPTIONS: Tuple[ToolKind, ...] = (
    ToolKind.LINE,
    ToolKind.ARROW,
    ToolKind.CIRCLE,
    ToolKind.SKETCH,
)

MARKER_KINDS = (ToolKind.LINE, ToolKind.ARROW, ToolKind.CIRCLE)

# JSON field names for each marker's two defining points.
_POINT_NAMES: Dict[ToolKind, Tuple[str, str]] = {
    ToolKind.LINE: ("p1", "p2"),
    ToolKind.ARROW: ("head", "tail"),
    ToolKind.CIRCLE: ("center", "radius_point"),
}


class Handle(Enum):
    LINE_P1 = "line_p1"
    LINE_P2 = "line_p2"
    ARROW_HEAD = "arrow_head"
    ARROW_TAIL = "arrow_tail"
    CIRCLE_CENTER = "circle_center"
    CIRCLE_RADIUS = "circle_radius"


_HANDLES: Dict[ToolKind, Tuple[Handle, Handle]] = {
    ToolKind.LINE: (Handle.LINE_P1, Handle.LINE_P2),
    ToolKind.ARROW: (Handle.ARROW_HEAD, Handle.ARROW_TAIL),
    ToolKind.CIRCLE: (Handle.CIRCLE_CENTER, Handle.CIRCLE_RADIUS),
}


def _dist(a: Point, b: Point) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


@dataclass
class Marker:
    """A parametric marker: line, arrow or circle.

    `a` is the press anchor (line p1 / arrow head / circle center), `b`
    the release point (line p2 / arrow tail / circle radius point).
    Locked markers (e.g. a trial's pre-placed reference) survive
    clear_markers and refuse handle edits.
    """

    id: int
    kind: ToolKind
    a: Point
    b: Point
    locked: bool = False

    @property
    def radius(self) -> float:
        if self.kind is not ToolKind.CIRCLE:
            raise ToolStateError("radius only defined for circles")
        return _dist(self.a, self.b)

    def handle_positions(self) -> Tuple[Tuple[Handle, Point], Tuple[Handle, Point]]:
        ha, hb = _HANDLES[self.kind]
        return ((ha, self.a), (hb, self.b))

    def move_handle(self, handle: Handle, point: Point) -> None:
        ha, hb = _HANDLES[self.kind]
        if handle is ha:
            self.a = point
        elif handle is hb:
            self.b = point
        else:
            raise ToolStateError(f"{handle} does not belong to a {self.kind.value}")

    def to_dict(self) -> dict:
        na, nb = _POINT_NAMES[self.kind]
        return {
            "id": self.id,
            "kind": self.kind.value,
            na: list(self.a),
            nb: list(self.b),
            "locked": self.locked,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Marker":
        kind = ToolKind(d["kind"])
        na, nb = _POINT_NAMES[kind]
        return cls(
            id=int(d["id"]),
            kind=kind,
            a=tuple(d[na]),
            b=tuple(d[nb]),
            locked=bool(d.get("locked", False)),
        )


@dataclass
class SketchStroke:
    id: int
    points: List[Point]

    def to_dict(self) -> dict:
        return {"id": self.id, "points": [list(p) for p in self.points]}

    @classmethod
    def from_dict(cls, d: dict) -> "SketchStroke":
        return cls(id=int(d["id"]), points=[tuple(p) for p in d["points"]])


# --- tool states -----------------------------------------------------------

@dataclass(frozen=True)
class Idle:
    pass


@dataclass(frozen=True)
class MenuOpen:
    pass


@dataclass(frozen=True)
class Armed:
    kind: ToolKind


@dataclass(frozen=True)
class DraggingCreate:
    kind: ToolKind
    anchor: Point
    current: Point


@dataclass(frozen=True)
class DraggingEdit:
    marker_id: int
    handle: Handle
    current: Point


@dataclass(frozen=True)
class Sketching:
    stroke_id: int


ToolState = Union[Idle, MenuOpen, Armed, DraggingCreate, DraggingEdit, Sketching]

_DRAG_STATES = (DraggingCreate, DraggingEdit, Sketching)


@dataclass
class CaptureRecord:
    """One screenshot event: frozen annotation layer plus optional frame ref.

    `image` holds the rasterized composite when a frame buffer was given;
    it is never serialized (the layer dict is the durable artifact).
    """

    id: int
    t_ms: float
    layer: dict
    frame_ref: Optional[str] = None
    image: Optional[object] = None

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "t_ms": self.t_ms,
            "layer": self.layer,
            "frame_ref": self.frame_ref,
        }


class Annotator:
    """Single-owner annotation state machine and layer store.

    All events are serialized through the engine's one queue; operations
    here assume one caller at a time.
    """

    def __init__(self) -> None:
        self.state: ToolState = Idle()
        self.markers: List[Marker] = []
        self.strokes: List[SketchStroke] = []
        self._next_marker_id = 1
        self._next_stroke_id = 1
        self._next_capture_id = 1
        self._active_stroke: List[Point] = []

    # -- menu ---------------------------------------------------------------

    def open_menu(self) -> ToolState:
        if isinstance(self.state, _DRAG_STATES):
            raise ToolStateError("cannot open menu while dragging")
        self.state = MenuOpen()
        return self.state

    def choose_kind(self, kind: ToolKind) -> ToolState:
        if not isinstance(self.state, MenuOpen):
            raise ToolStateError("choose_kind requires the menu to be open")
        self.state = Armed(kind)
        return self.state

    def close_menu(self) -> ToolState:
        if isinstance(self.state, MenuOpen):
            self.state = Idle()
        return self.state

    # -- press / drag / release ----------------------------------------------

    def left_press(self, point: Point) -> ToolState:
        if isinstance(self.state, _DRAG_STATES):
            log.info("duplicate press ignored in %s", type(self.state).__name__)
            return self.state
        if isinstance(self.state, MenuOpen):
            # Menu slice selection is resolved by the router, not here.
            return self.state
        if isinstance(self.state, Armed):
            if self.state.kind is ToolKind.SKETCH:
                self._active_stroke = [point]
                self.state = Sketching(self._next_stroke_id)
            else:
                self.state = DraggingCreate(self.state.kind, point, point)
            return self.state
        # Idle: a press near a handle starts an edit, otherwise nothing.
        picked = self._pick_handle(point)
        if picked is not None:
            marker_id, handle = picked
            self.state = DraggingEdit(marker_id, handle, point)
            self._marker(marker_id).move_handle(handle, point)
        return self.state

    def _pick_handle(self, point: Point) -> Optional[Tuple[int, Handle]]:
        """Nearest unlocked handle within the pick radius, or None."""
        best = None
        best_d = PICK_RADIUS
        for m in self.markers:
            if m.locked:
                continue
            for handle, pos in m.handle_positions():
                d = _dist(pos, point)
                if d <= best_d:
                    best_d = d
                    best = (m.id, handle)
        return best

    def drag_update(self, point: Point) -> None:
        state = self.state
        if isinstance(state, DraggingCreate):
            self.state = replace(state, current=point)
        elif isinstance(state, DraggingEdit):
            self.state = replace(state, current=point)
            self._marker(state.marker_id).move_handle(state.handle, point)
        elif isinstance(state, Sketching):
            if _dist(self._active_stroke[-1], point) >= SKETCH_MIN_SPACING:
                self._active_stroke.append(point)
        # Outside a drag the reticle just moves; nothing to update.

    def left_release(self, point: Point) -> ToolState:
        state = self.state
        if isinstance(state, DraggingCreate):
            if _dist(state.anchor, point) < ZERO_LENGTH_EPS:
                log.info("zero-length %s discarded", state.kind.value)
            else:
                self.markers.append(
                    Marker(self._next_marker_id, state.kind, state.anchor, point)
                )
                self._next_marker_id += 1
            self.state = Armed(state.kind)
        elif isinstance(state, DraggingEdit):
            self._marker(state.marker_id).move_handle(state.handle, point)
            self.state = Idle()
        elif isinstance(state, Sketching):
            if _dist(self._active_stroke[-1], point) >= SKETCH_MIN_SPACING:
                self._active_stroke.append(point)
            if len(self._active_stroke) >= 2:
                self.strokes.append(SketchStroke(state.stroke_id, self._active_stroke))
                self._next_stroke_id += 1
            else:
                log.info("single-point sketch discarded")
            self._active_stroke = []
            self.state = Armed(ToolKind.SKETCH)
        else:
            raise ToolStateError("release without a matching press")
        return self.state

    def _marker(self, marker_id: int) -> Marker:
        for m in self.markers:
            if m.id == marker_id:
                return m
        raise ToolStateError(f"marker {marker_id} not found")

    # -- layer management -----------------------------------------------------

    def add_marker(self, kind: ToolKind, a: Point, b: Point, locked: bool = False) -> Marker:
        """Directly place a committed marker (used to seed trial references)."""
        if kind not in MARKER_KINDS:
            raise ValueError(f"{kind} is not a marker kind")
        if _dist(a, b) <= 0.0:
            raise ValueError("marker must have positive extent")
        m = Marker(self._next_marker_id, kind, a, b, locked=locked)
        self._next_marker_id += 1
        self.markers.append(m)
        return m

    def clear_markers(self) -> None:
        """Remove all unlocked markers; sketch strokes are untouched."""
        kept = [m for m in self.markers if m.locked]
        removed_ids = {m.id for m in self.markers if not m.locked}
        self.markers = kept
        if isinstance(self.state, DraggingEdit) and self.state.marker_id in removed_ids:
            self.state = Idle()

    def clear_sketch(self) -> None:
        """Remove all committed strokes; markers are untouched."""
        self.strokes = []

    # -- serialization / capture ----------------------------------------------

    LAYER_SCHEMA_VERSION = 1

    def serialize_layer(self) -> dict:
        return {
            "version": self.LAYER_SCHEMA_VERSION,
            "markers": [m.to_dict() for m in self.markers],
            "strokes": [s.to_dict() for s in self.strokes],
        }

    def load_layer(self, layer: dict) -> None:
        if layer.get("version") != self.LAYER_SCHEMA_VERSION:
            raise ValueError(f"unsupported layer version {layer.get('version')!r}")
        self.markers = [Marker.from_dict(d) for d in layer["markers"]]
        self.strokes = [SketchStroke.from_dict(d) for d in layer["strokes"]]
        ids = [m.id for m in self.markers] + [0]
        self._next_marker_id = max(ids) + 1
        sids = [s.id for s in self.strokes] + [0]
        self._next_stroke_id = max(sids) + 1

    def screenshot(
        self,
        t_ms: float,
        frame=None,
        aspect: float = 1.0,
        capture_id: Optional[int] = None,
    ) -> CaptureRecord:
        """Freeze the current layer into a capture record.

        When `frame` (a HxW or HxWx3 uint8 array) is provided, markers and
        strokes are rasterized over a copy, attached as `record.image`.
        Pass `capture_id` to number captures from an external counter.
        """
        if capture_id is None:
            capture_id = self._next_capture_id
            self._next_capture_id += 1
        record = CaptureRecord(capture_id, t_ms, self.serialize_layer())
        if frame is not None:
            from .raster import rasterize_layer

            record.image = rasterize_layer(frame, self.markers, self.strokes, aspect)
        return record
