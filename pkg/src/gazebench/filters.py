"""Reticle stabilization filters for the head-gaze pointer.

The raw head orientation stream is mapped to the rendered reticle
direction under one of five interface conditions: the unfiltered
immediate mapping, a moving average over the last n samples (n = 10 or
30), or incremental gain scaling of head motion (ratio 0.8 or 0.5).
"""

import logging
from collections import deque
from dataclasses import dataclass
from typing import Deque, Optional, Tuple, Union

from .angles import Direction, circular_mean, clamp_pitch, wrap_angle

log = logging.getLogger(__name__)


class NonMonotonicSampleError(ValueError):
    """Raised when a pushed sample does not advance the stream clock."""


@dataclass(frozen=True)
class GazeSample:
    """One timestamped head orientation.

    Yaw is wrapped into (-pi, pi] and pitch clamped to [-pi/2, pi/2] on
    construction, so downstream code can rely on normalized values.
    """

    t: float  # milliseconds, strictly increasing within one stream
    yaw: float
    pitch: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "yaw", wrap_angle(self.yaw))
        object.__setattr__(self, "pitch", clamp_pitch(self.pitch))

    @property
    def direction(self) -> Direction:
        return (self.yaw, self.pitch)


@dataclass(frozen=True)
class Immediate:
    """Identity mapping: the reticle sits exactly on the head direction."""

    def describe(self) -> str:
        return "immediate"


@dataclass(frozen=True)
class Average:
    """Moving average over the last `window` samples."""

    window: int

    def __post_init__(self) -> None:
        if self.window < 1:
            raise ValueError(f"average window must be >= 1, got {self.window}")

    def describe(self) -> str:
        return f"average-{self.window}"


@dataclass(frozen=True)
class Scaled:
    """Head-to-reticle motion gain: the reticle moves `ratio` of the head delta."""

    ratio: float

    def __post_init__(self) -> None:
        if not 0.0 < self.ratio <= 1.0:
            raise ValueError(f"scaling ratio must be in (0, 1], got {self.ratio}")

    def describe(self) -> str:
        return f"scaled-{self.ratio:g}"


FilterMode = Union[Immediate, Average, Scaled]

# The five interface conditions of the planned study, in canonical order.
CONDITION_MODES: Tuple[FilterMode, ...] = (
    Immediate(),
    Average(10),
    Average(30),
    Scaled(0.8),
    Scaled(0.5),
)


def mode_to_dict(mode: FilterMode) -> dict:
    if isinstance(mode, Immediate):
        return {"kind": "immediate"}
    if isinstance(mode, Average):
        return {"kind": "average", "window": mode.window}
    return {"kind": "scaled", "ratio": mode.ratio}


def mode_from_dict(d: dict) -> FilterMode:
    kind = d.get("kind")
    if kind == "immediate":
        return Immediate()
    if kind == "average":
        return Average(int(d["window"]))
    if kind == "scaled":
        return Scaled(float(d["ratio"]))
    raise ValueError(f"unknown filter mode {d!r}")


class ReticleFilter:
    """Mutable filter state for one gaze stream.

    Single-writer: exactly one stream owner pushes samples.  `output` is
    an immutable (yaw, pitch) tuple and safe to hand out as a snapshot.
    """

    def __init__(self, mode: FilterMode, initial_head: Direction = (0.0, 0.0)) -> None:
        self.mode = mode
        initial_head = (wrap_angle(initial_head[0]), clamp_pitch(initial_head[1]))
        self._last_t: Optional[float] = None
        self._window: Deque[GazeSample] = deque()
        self._reticle: Direction = initial_head
        self._last_head: Direction = initial_head
        if isinstance(mode, Average):
            self._window = deque(maxlen=mode.window)
            self._window.append(GazeSample(0.0, *initial_head))
            self._last_t = 0.0

    @property
    def output(self) -> Direction:
        """Most recent reticle direction (initial head before any push)."""
        return self._reticle

    @property
    def window_len(self) -> int:
        return len(self._window)

    def push(self, sample: GazeSample) -> Direction:
        """Ingest one head sample and return the new reticle direction."""
        if self._last_t is not None and sample.t <= self._last_t:
            raise NonMonotonicSampleError(
                f"sample at t={sample.t} does not advance past t={self._last_t}"
            )
        self._last_t = sample.t

        if isinstance(self.mode, Immediate):
            self._reticle = sample.direction
        elif isinstance(self.mode, Average):
            self._window.append(sample)
            yaw = circular_mean(s.yaw for s in self._window)
            pitch = sum(s.pitch for s in self._window) / len(self._window)
            self._reticle = (yaw, pitch)
        else:
            r = self.mode.ratio
            dy = wrap_angle(sample.yaw - self._last_head[0])
            dp = sample.pitch - self._last_head[1]
            self._reticle = (
                wrap_angle(self._reticle[0] + r * dy),
                self._reticle[1] + r * dp,
            )
        self._last_head = sample.direction
        return self._reticle

    def recenter(self) -> None:
        """Snap the decoupled reticle back under the current head direction.

        Only meaningful for the scaled mode, where the gain accumulates an
        offset between view center and reticle; a no-op elsewhere.
        """
        if isinstance(self.mode, Scaled):
            self._reticle = self._last_head
        else:
            log.warning("recenter ignored for %s mode", self.mode.describe())
