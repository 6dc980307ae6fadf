"""Headless scripted trials: timeline runner and the synthetic perfect user.

A scripted trial drives the full engine (filter -> scene -> annotation ->
scoring) from two timed streams: a gaze trace and a button script.  The
perfect-user generator builds those streams closed-loop for any filter
condition by simulating its own copy of the reticle filter, steering the
head so the reticle lands on every required point: browse the solution
folder, pick the tool from the menu, annotate each target, take the
screenshot that ends the problem.
"""

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from .angles import Direction, wrap_angle
from .annotation import ToolKind
from .config import SessionConfig
from .controls import (
    VideoControl,
    grid_cell_center,
    menu_slice_press_uv,
    video_control_center,
)
from .engine import Engine, SessionLog, TrialResult
from .filters import Average, GazeSample, Immediate, ReticleFilter, Scaled
from .scene import PanelKind, Scene
from .schedule import Condition
from .tasks import RING_RADIUS, TaskKind, TaskSpec

# Head steering limits for the synthetic user.
MAX_STEP_RAD = math.radians(3.0)  # per tick; 180 deg/s at 60 Hz
ARRIVAL_TOL_RAD = 1e-9
GOTO_TICK_LIMIT = 20_000


class TrialScriptError(RuntimeError):
    """The script/trace is inconsistent or leaves the trial unfinished."""


@dataclass(frozen=True)
class ScriptEvent:
    t: float  # ms
    side: str  # "left" | "right"
    edge: str  # "press" | "release"


def _check_monotonic(values: Sequence[float], what: str) -> None:
    for a, b in zip(values, values[1:]):
        if b <= a:
            raise TrialScriptError(f"{what} timestamps not strictly increasing: {a} -> {b}")


def run_scripted_trial(
    condition: Condition,
    gaze_trace: Sequence[GazeSample],
    input_script: Sequence[ScriptEvent],
    task: TaskSpec,
    config: Optional[SessionConfig] = None,
    log_path: Optional[Path] = None,
    persist_dir: Optional[Path] = None,
) -> Tuple[TrialResult, Engine]:
    """Execute one trial without any UI; bit-reproducible for fixed inputs.

    The trial-start control record lands on tick 0; trace and script times
    are engine milliseconds from tick 1 onward.
    """
    _check_monotonic([s.t for s in gaze_trace], "gaze trace")
    _check_monotonic([e.t for e in input_script], "input script")

    config = config or SessionConfig(mode=condition.mode)
    session_log = SessionLog(log_path) if log_path else None
    engine = Engine(config, session_log=session_log, persist_dir=persist_dir)
    engine.start_trial(condition, task)  # consumes tick 0

    tick_ms = config.tick_ms
    by_tick: Dict[int, List[Tuple[float, dict]]] = {}

    def schedule(t: float, msg: dict) -> None:
        tick = max(1, int(t // tick_ms) + 1)
        by_tick.setdefault(tick, []).append((t, msg))

    for s in gaze_trace:
        schedule(s.t, {"type": "gaze", "t": s.t, "yaw": s.yaw, "pitch": s.pitch,
                       "source": "trace"})
    for e in input_script:
        schedule(e.t, {"type": "input", "t": e.t, "side": e.side, "edge": e.edge,
                       "source": "remote"})

    if not by_tick:
        raise TrialScriptError("empty script: nothing to run")
    last_tick = max(by_tick)
    while engine.tick_id <= last_tick:
        group = by_tick.get(engine.tick_id, ())
        engine.step([m for _, m in sorted(group, key=lambda x: x[0])])

    if engine.trial is not None:
        raise TrialScriptError(
            f"script ended at tick {engine.tick_id} with the trial still active "
            f"(tool={type(engine.annot.state).__name__}, "
            f"browser={engine.browser.mode.value}); did the script miss the screenshot?"
        )
    engine.close()
    return engine.results[-1], engine


# -- synthetic perfect user ------------------------------------------------------


@dataclass
class _UserSim:
    """Closed-loop head steering against a private copy of the filter."""

    scene: Scene
    condition: Condition
    tick_ms: float
    debounce_ms: float = 20.0
    head: Direction = (0.0, 0.0)
    gaze: List[GazeSample] = field(default_factory=list)
    events: List[ScriptEvent] = field(default_factory=list)
    tick: int = 1

    def __post_init__(self) -> None:
        self.filter = ReticleFilter(self.condition.mode, self.head)
        self.video = self.scene.panel_by_kind(PanelKind.VIDEO)
        # Hold this many ticks after each button edge so the next edge
        # clears the engine-side debounce window.
        self._hold_ticks = int(math.ceil(self.debounce_ms / self.tick_ms)) + 1

    @property
    def now(self) -> float:
        return self.tick * self.tick_ms

    def _emit(self, head: Direction) -> None:
        self.head = head
        sample = GazeSample(self.now, head[0], head[1])
        self.gaze.append(sample)
        self.filter.push(sample)
        self.tick += 1

    def _head_target(self, desired: Direction) -> Direction:
        mode = self.condition.mode
        if isinstance(mode, Scaled):
            # Invert the gain: move the head by the remaining reticle error / ratio.
            ry, rp = self.filter.output
            return (
                self.head[0] + wrap_angle(desired[0] - ry) / mode.ratio,
                self.head[1] + (desired[1] - rp) / mode.ratio,
            )
        return desired

    def goto_dir(self, desired: Direction) -> None:
        """Steer until the simulated reticle sits on `desired` (exact for
        the immediate mode, within 1e-9 rad otherwise)."""
        for _ in range(GOTO_TICK_LIMIT):
            ry, rp = self.filter.output
            if (
                abs(wrap_angle(desired[0] - ry)) <= ARRIVAL_TOL_RAD
                and abs(desired[1] - rp) <= ARRIVAL_TOL_RAD
            ):
                return
            target = self._head_target(desired)
            dy = wrap_angle(target[0] - self.head[0])
            dp = target[1] - self.head[1]
            dy = max(-MAX_STEP_RAD, min(MAX_STEP_RAD, dy))
            dp = max(-MAX_STEP_RAD, min(MAX_STEP_RAD, dp))
            self._emit((wrap_angle(self.head[0] + dy), self.head[1] + dp))
        raise TrialScriptError(
            f"reticle never converged to {desired} under {self.condition.mode.describe()}"
        )

    def goto_panel_uv(self, panel_id: str, u: float, v: float) -> None:
        self.goto_dir(self.scene.uv_to_dir(panel_id, u, v))

    def goto_video_point(self, point: Tuple[float, float]) -> None:
        """Steer to an aspect-corrected annotation point on the video panel."""
        self.goto_panel_uv("video", point[0] / self.video.aspect, point[1])

    def _edge(self, side: str, edge: str) -> None:
        # The event lands just after the last emitted sample, inside the
        # same engine tick; the hold keeps edges a debounce window apart.
        self.events.append(ScriptEvent(self.now - self.tick_ms + 0.25, side, edge))
        for _ in range(self._hold_ticks):
            self._emit(self.head)

    def press(self, side: str = "left") -> None:
        self._edge(side, "press")

    def release(self, side: str = "left") -> None:
        self._edge(side, "release")

    def click(self, side: str = "left") -> None:
        """Press then release, head held still."""
        self.press(side)
        self.release(side)


def perfect_user_script(
    condition: Condition,
    task: TaskSpec,
    config: Optional[SessionConfig] = None,
    browse_solution: bool = True,
    folder_names: Optional[Sequence[str]] = None,
) -> Tuple[List[GazeSample], List[ScriptEvent]]:
    """Build trace + script that solves `task` exactly under `condition`.

    `folder_names` is the browser's alphabetical folder list at trial
    start (defaults to the captures folder plus the task folder).
    """
    config = config or SessionConfig(mode=condition.mode)
    scene = config.layout.build_scene()
    sim = _UserSim(scene, condition, config.tick_ms, config.debounce_ms)

    if browse_solution:
        names = list(folder_names) if folder_names else sorted(["captures", task.folder_name])
        position = names.index(task.folder_name)
        sim.goto_panel_uv("image", *grid_cell_center(position))
        sim.click()
        if task.solution_images:
            sim.goto_panel_uv("image", *grid_cell_center(0))
            sim.click()

    tool = ToolKind.CIRCLE if task.kind is TaskKind.PEG_TRANSFER else ToolKind.ARROW
    sim.goto_panel_uv("video", *video_control_center(VideoControl.MENU))
    sim.click()
    aspect = sim.video.aspect
    sim.goto_panel_uv("video", *menu_slice_press_uv(tool, aspect))
    sim.click()

    if task.kind is TaskKind.PEG_TRANSFER:
        for target in task.targets:
            sim.goto_video_point(target)
            sim.press()
            sim.goto_video_point((target[0] + RING_RADIUS, target[1]))
            sim.release()
    else:
        # One arrow per hole pair: anchor (arrowhead) on the destination
        # hole, release (tail) back on the origin hole.
        for origin, dest in zip(task.targets, task.targets[1:]):
            sim.goto_video_point(dest)
            sim.press()
            sim.goto_video_point(origin)
            sim.release()

    sim.goto_panel_uv("video", *video_control_center(VideoControl.SCREENSHOT))
    sim.click()
    return sim.gaze, sim.events
