"""The deterministic interaction engine.

One engine instance owns the whole interaction state: reticle filter,
panel scene, annotation machine, image browser and the active trial.  It
advances only on its tick; every inbound message (gaze, button, control)
is applied in arrival order inside `step`, which makes the mapping from
a session log to engine state a pure function and replays exact.

Wire/log message format (one JSON object each):

    {"type": "gaze", "t": <ms>, "yaw": <rad>, "pitch": <rad>, "source": "..."}
    {"type": "input", "t": <ms>, "side": "left|right",
     "edge": "press|release", "source": "ring|pedal|keyboard|remote"}
    {"type": "control", "action": "<name>", ...}
"""

import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from .angles import Direction
from .annotation import (
    Annotator,
    Armed,
    DraggingCreate,
    DraggingEdit,
    MenuOpen,
    Sketching,
    ToolKind,
    ToolStateError,
)
from .browser import BrowserError, BrowserMode, Folder, ImageBrowser, PageDirection
from .config import SessionConfig
from .filters import GazeSample, ReticleFilter
from .inputs import Action, EdgeDebouncer, GazeContext, InputEvent, route
from .scene import PanelHit, PanelKind, Scene
from .schedule import Condition
from .scoring import ARROW_ANGLE_TOL_DEG, MATCH_THRESHOLD, head_path_deg, score_layer
from .tasks import RING_RADIUS, TaskSpec

log = logging.getLogger(__name__)

SNAPSHOT_SCHEMA = 1


@dataclass
class TrialResult:
    trial_id: int
    condition: Condition
    task: TaskSpec
    time_ms: float
    precision_mean: Optional[float]
    accuracy: float
    head_path_deg: float
    completed: bool
    aborted: bool
    event_log_ref: Optional[str] = None
    match_threshold: float = MATCH_THRESHOLD
    arrow_angle_tol_deg: float = ARROW_ANGLE_TOL_DEG

    def to_dict(self) -> dict:
        return {
            "trial_id": self.trial_id,
            "condition": self.condition.to_dict(),
            "task": self.task.to_dict(),
            "time_ms": self.time_ms,
            "precision_mean": self.precision_mean,
            "accuracy": self.accuracy,
            "head_path_deg": self.head_path_deg,
            "completed": self.completed,
            "aborted": self.aborted,
            "event_log_ref": self.event_log_ref,
            "params": {
                "match_threshold": self.match_threshold,
                "arrow_angle_tol_deg": self.arrow_angle_tol_deg,
            },
        }


@dataclass
class _ActiveTrial:
    trial_id: int
    condition: Condition
    task: TaskSpec
    start_tick: int
    start_ms: float
    head_samples: List[GazeSample] = field(default_factory=list)


class SessionLog:
    """Append-only JSON Lines sink for one session."""

    VERSION = 1

    def __init__(self, path: Optional[Path], header_extra: Optional[dict] = None):
        self.path = Path(path) if path else None
        self._fh = None
        self._header_extra = header_extra or {}

    def open(self, config: SessionConfig, folders: Sequence[Folder]) -> None:
        if self.path is None:
            return
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._fh = open(self.path, "w")
        header = {
            "type": "header",
            "version": self.VERSION,
            "config": config.to_dict(),
            "folders": [{"name": f.name, "images": list(f.images)} for f in folders],
        }
        header.update(self._header_extra)
        self.write(header)

    def write(self, record: dict) -> None:
        if self._fh is not None:
            self._fh.write(json.dumps(record, sort_keys=True) + "\n")

    def close(self, final_tick: int) -> None:
        if self._fh is not None:
            self.write({"type": "end", "tick": final_tick})
            self._fh.close()
            self._fh = None


class Engine:
    """Single-mutator interaction engine; see module docstring."""

    def __init__(
        self,
        config: SessionConfig,
        folders: Optional[List[Folder]] = None,
        session_log: Optional[SessionLog] = None,
        persist_dir: Optional[Path] = None,
    ) -> None:
        self.config = config
        self.scene: Scene = config.layout.build_scene()
        self.filter = ReticleFilter(config.mode)
        self.annot = Annotator()
        if folders is not None:
            self.browser = ImageBrowser(folders)
        elif config.image_root:
            self.browser = ImageBrowser.from_directory(Path(config.image_root))
        else:
            self.browser = ImageBrowser()
        self.debouncer = EdgeDebouncer(config.debounce_ms)

        self.tick_id = 0
        self._head: Direction = (0.0, 0.0)
        self._hit: Optional[PanelHit] = None
        self._video_point = (0.0, 0.0)
        self._video_aspect = self.scene.panel_by_kind(PanelKind.VIDEO).aspect

        self.trial: Optional[_ActiveTrial] = None
        self.results: List[TrialResult] = []
        self.captures: List[dict] = []
        self._next_trial_id = 1
        self._next_capture_id = 1
        self.dropped_messages = 0

        self.persist_dir = Path(persist_dir) if persist_dir else None
        self.session_log = session_log
        if self.session_log is not None:
            self.session_log.open(config, list(self._initial_folders()))

    def _initial_folders(self):
        for name in self.browser.folder_names:
            yield self.browser.folder(name)

    @property
    def time_ms(self) -> float:
        return self.tick_id * self.config.tick_ms

    # -- tick -------------------------------------------------------------------

    def step(self, messages: Sequence[dict] = ()) -> None:
        """Advance one tick, applying queued messages in arrival order."""
        if messages and self.session_log is not None:
            self.session_log.write(
                {"type": "tick", "tick": self.tick_id, "t": self.time_ms}
            )
        for msg in messages:
            if self.session_log is not None:
                self.session_log.write({"type": "msg", "tick": self.tick_id, "msg": msg})
            self._apply_message(msg)
        self._post_tick()
        self.tick_id += 1

    def _post_tick(self) -> None:
        # While a drag or sketch is live, the reticle keeps steering it.
        if isinstance(self.annot.state, (DraggingCreate, DraggingEdit, Sketching)):
            if self._hit is not None and self._hit.kind is PanelKind.VIDEO:
                self.annot.drag_update(self._corrected(self._hit))

    def _apply_message(self, msg: dict) -> None:
        try:
            mtype = msg.get("type")
            if mtype == "gaze":
                self._apply_gaze(msg)
            elif mtype == "input":
                self._apply_input(msg)
            elif mtype == "control":
                self._apply_control(msg)
            else:
                self.dropped_messages += 1
                log.warning("unknown message type %r", mtype)
        except (ToolStateError, BrowserError, ValueError, KeyError, TypeError) as exc:
            # Bad client input (stray release, out-of-range index, malformed
            # fields, stale timestamps) must never corrupt engine state.
            self.dropped_messages += 1
            log.warning("message rejected: %s", exc)

    # -- gaze ---------------------------------------------------------------------

    def _apply_gaze(self, msg: dict) -> None:
        t, yaw, pitch = msg.get("t"), msg.get("yaw"), msg.get("pitch")
        if not all(isinstance(x, (int, float)) and math.isfinite(x) for x in (t, yaw, pitch)):
            self.dropped_messages += 1
            log.warning("malformed gaze message dropped: %r", msg)
            return
        sample = GazeSample(float(t), float(yaw), float(pitch))
        self.filter.push(sample)  # may raise NonMonotonicSampleError
        self._head = sample.direction
        self.scene.update_head(self._head)
        self._refresh_hit()
        if self.trial is not None:
            self.trial.head_samples.append(sample)

    def _refresh_hit(self) -> None:
        self._hit = self.scene.ray_hit(self.filter.output)
        if self._hit is not None and self._hit.kind is PanelKind.VIDEO:
            self._video_point = self._corrected(self._hit)

    def _corrected(self, hit: PanelHit):
        return (hit.u * self._video_aspect, hit.v)

    # -- buttons --------------------------------------------------------------------

    def _apply_input(self, msg: dict) -> None:
        event = InputEvent.from_dict(msg)
        if not self.debouncer.accept(event):
            return
        ctx = GazeContext(
            hit=self._hit,
            tool_state=self.annot.state,
            browser_mode=self.browser.mode,
            grid_page=self.browser.grid_page,
            video_aspect=self._video_aspect,
            video_point=self._video_point,
        )
        action = route(event, ctx)
        self._apply_action(action)

    def _apply_action(self, action: Action) -> None:
        name = action.name
        if name == "noop":
            log.debug("noop: %s", action.args[0] if action.args else "")
        elif name == "menu_open":
            self.annot.open_menu()
        elif name == "menu_choose":
            self.annot.choose_kind(action.args[0])
        elif name == "menu_close":
            self.annot.close_menu()
        elif name == "clear_markers":
            self.annot.clear_markers()
        elif name == "clear_sketch":
            self.annot.clear_sketch()
        elif name == "screenshot":
            self._take_screenshot()
        elif name == "annotation_press":
            self.annot.left_press(action.args[0])
        elif name == "annotation_release":
            self.annot.left_release(action.args[0])
        elif name == "follow_toggle":
            self.scene.set_follow(not self.scene.follow_mode, self._head)
            self._refresh_hit()
        elif name == "browser_back":
            self.browser.back()
        elif name == "browser_next":
            self.browser.page(PageDirection.NEXT)
        elif name == "browser_prev":
            self.browser.page(PageDirection.PREV)
        elif name == "browser_select_folder":
            self.browser.select_folder(action.args[0])
        elif name == "browser_select_image":
            self.browser.select_image(action.args[0])
        else:
            log.warning("unroutable action %r", name)

    # -- controls ----------------------------------------------------------------------

    def _apply_control(self, msg: dict) -> None:
        action = msg.get("action")
        if action == "recenter":
            self.filter.recenter()
            self._refresh_hit()
        elif action == "start_trial":
            condition = Condition.from_dict(msg["condition"])
            task = TaskSpec.from_dict(msg["task"])
            self._start_trial(condition, task)
        elif action == "abort_trial":
            self._finish_trial(completed=False, aborted=True)
        else:
            self.dropped_messages += 1
            log.warning("unknown control action %r", action)

    # -- screenshots ---------------------------------------------------------------------

    def _take_screenshot(self) -> None:
        record = self.annot.screenshot(self.time_ms, capture_id=self._next_capture_id)
        self._next_capture_id += 1
        self.captures.append(record.to_dict())
        if self.persist_dir is not None:
            cap_dir = self.persist_dir / "captures"
            cap_dir.mkdir(parents=True, exist_ok=True)
            path = cap_dir / f"capture_{record.id}.json"
            with open(path, "w") as fh:
                json.dump(record.to_dict(), fh, sort_keys=True, indent=1)
        # The browser reference stays persistence-independent so replayed
        # sessions reproduce identical browser listings.
        self.browser.add_capture(f"capture:{record.id}")
        # The trial protocol ends each problem with its screenshot.
        if self.trial is not None:
            self._finish_trial(completed=True, aborted=False)

    # -- trials -----------------------------------------------------------------------------

    def start_trial(self, condition: Condition, task: TaskSpec) -> None:
        """Queue-free entry point used by scripted runners (logged as control)."""
        msg = {
            "type": "control",
            "action": "start_trial",
            "condition": condition.to_dict(),
            "task": task.to_dict(),
        }
        self.step([msg])

    def _start_trial(self, condition: Condition, task: TaskSpec) -> None:
        if self.trial is not None:
            self._finish_trial(completed=False, aborted=True)
        self.filter = ReticleFilter(condition.mode, self._head)
        self.annot = Annotator()
        if task.green_ring is not None:
            ref_point = (task.green_ring[0] + RING_RADIUS, task.green_ring[1])
            self.annot.add_marker(ToolKind.CIRCLE, task.green_ring, ref_point, locked=True)
        if task.folder_name:
            folder = Folder(task.folder_name, list(task.solution_images))
            try:
                self.browser.add_folder(folder)
            except ValueError:
                self.browser.folder(task.folder_name).images = list(task.solution_images)
        self.browser.mode = BrowserMode.FOLDER_GRID
        self.browser.folder_name = None
        self.browser.index = 0
        self.browser.grid_page = 0
        self.trial = _ActiveTrial(
            trial_id=self._next_trial_id,
            condition=condition,
            task=task,
            start_tick=self.tick_id,
            start_ms=self.time_ms,
            head_samples=[GazeSample(self.time_ms, *self._head)],
        )
        self._next_trial_id += 1
        self._refresh_hit()

    def _finish_trial(self, completed: bool, aborted: bool) -> Optional[TrialResult]:
        trial = self.trial
        if trial is None:
            log.warning("no active trial to finish")
            return None
        score = score_layer(self.annot.markers, trial.task)
        result = TrialResult(
            trial_id=trial.trial_id,
            condition=trial.condition,
            task=trial.task,
            time_ms=self.time_ms - trial.start_ms,
            precision_mean=score.precision_mean,
            accuracy=score.accuracy,
            head_path_deg=head_path_deg(trial.head_samples),
            completed=completed,
            aborted=aborted,
        )
        self.trial = None
        if self.persist_dir is not None:
            trials_dir = self.persist_dir / "trials"
            trials_dir.mkdir(parents=True, exist_ok=True)
            path = trials_dir / f"trial_{result.trial_id}.json"
            result.event_log_ref = (
                str(self.session_log.path)
                if self.session_log and self.session_log.path
                else None
            )
            with open(path, "w") as fh:
                json.dump(result.to_dict(), fh, sort_keys=True, indent=1)
        self.results.append(result)
        return result

    # -- snapshots ------------------------------------------------------------------------------

    def _tool_dict(self) -> dict:
        state = self.annot.state
        if isinstance(state, MenuOpen):
            return {"state": "menu_open"}
        if isinstance(state, Armed):
            return {"state": "armed", "kind": state.kind.value}
        if isinstance(state, DraggingCreate):
            return {
                "state": "dragging_create",
                "kind": state.kind.value,
                "anchor": list(state.anchor),
                "current": list(state.current),
            }
        if isinstance(state, DraggingEdit):
            return {
                "state": "dragging_edit",
                "marker_id": state.marker_id,
                "handle": state.handle.value,
                "current": list(state.current),
            }
        if isinstance(state, Sketching):
            return {
                "state": "sketching",
                "points": [list(p) for p in self.annot._active_stroke],
            }
        return {"state": "idle"}

    def _panels_dict(self) -> List[dict]:
        out = []
        for panel in self.scene.panels:
            yaw, pitch = self.scene.world_dir(panel)
            out.append(
                {
                    "id": panel.id,
                    "kind": panel.kind.value,
                    "yaw": yaw,
                    "pitch": pitch,
                    "w_deg": math.degrees(2 * math.atan(panel.width / (2 * panel.distance))),
                    "h_deg": math.degrees(2 * math.atan(panel.height / (2 * panel.distance))),
                    "aspect": panel.aspect,
                    "interactive": panel.interactive,
                }
            )
        return out

    def snapshot(self) -> dict:
        """Self-contained renderable state for the current tick."""
        hit = self._hit
        trial = self.trial
        return {
            "type": "snapshot",
            "schema": SNAPSHOT_SCHEMA,
            "tick": self.tick_id,
            "time_ms": self.time_ms,
            "head": [self._head[0], self._head[1]],
            "reticle": [self.filter.output[0], self.filter.output[1]],
            "mode": self.filter.mode.describe(),
            "hit": (
                {"panel": hit.panel_id, "kind": hit.kind.value, "u": hit.u, "v": hit.v}
                if hit
                else None
            ),
            "tool": self._tool_dict(),
            "markers": [m.to_dict() for m in self.annot.markers],
            "strokes": [s.to_dict() for s in self.annot.strokes],
            "browser": self.browser.to_dict(),
            "follow": self.scene.follow_mode,
            "anchor": [self.scene.anchor[0], self.scene.anchor[1]],
            "panels": self._panels_dict(),
            "video_aspect": self._video_aspect,
            "captures": len(self.captures),
            "trial": (
                {
                    "trial_id": trial.trial_id,
                    "label": trial.condition.label(),
                    "condition": trial.condition.to_dict(),
                    "start_ms": trial.start_ms,
                    "task": trial.task.to_dict(),
                }
                if trial
                else None
            ),
            "results": len(self.results),
        }

    def serialize_snapshot(self) -> str:
        return json.dumps(self.snapshot(), sort_keys=True, separators=(",", ":"))

    def close(self) -> None:
        if self.session_log is not None:
            self.session_log.close(self.tick_id)
