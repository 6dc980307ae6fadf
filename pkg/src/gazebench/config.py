"""Session configuration: one JSON document drives the whole engine."""

import json
from dataclasses import dataclass, field, asdict
from pathlib import Path
from typing import Optional, Tuple

from .filters import FilterMode, Immediate, mode_from_dict, mode_to_dict
from .scene import (
    DEFAULT_DISTANCE,
    DEFAULT_GAP_DEG,
    DEFAULT_HELP_DEG,
    DEFAULT_IMAGE_DEG,
    DEFAULT_VIDEO_DEG,
    Scene,
    layout_default,
)

TICK_RATE_MIN = 10.0
TICK_RATE_MAX = 240.0


@dataclass
class LayoutConfig:
    """Angular panel footprint overrides, degrees."""

    video_deg: Tuple[float, float] = DEFAULT_VIDEO_DEG
    image_deg: Tuple[float, float] = DEFAULT_IMAGE_DEG
    help_deg: Tuple[float, float] = DEFAULT_HELP_DEG
    distance: float = DEFAULT_DISTANCE
    gap_deg: float = DEFAULT_GAP_DEG

    def build_scene(self) -> Scene:
        scene = layout_default(
            tuple(self.video_deg),
            tuple(self.image_deg),
            tuple(self.help_deg),
            self.distance,
            self.gap_deg,
        )
        scene.validate()
        return scene


@dataclass
class SessionConfig:
    mode: FilterMode = field(default_factory=Immediate)
    tick_rate_hz: float = 60.0
    layout: LayoutConfig = field(default_factory=LayoutConfig)
    debounce_ms: float = 20.0
    serial_device: Optional[str] = None
    serial_source: str = "ring"  # ring | pedal
    image_root: Optional[str] = None
    output_dir: str = "sessions"
    design: str = "within"  # within | between_task
    participant_id: int = 0
    task_seed: int = 1

    def __post_init__(self) -> None:
        if not TICK_RATE_MIN <= self.tick_rate_hz <= TICK_RATE_MAX:
            raise ValueError(
                f"tick rate {self.tick_rate_hz} outside "
                f"[{TICK_RATE_MIN}, {TICK_RATE_MAX}] Hz"
            )
        if self.serial_source not in ("ring", "pedal"):
            raise ValueError(f"unknown serial source {self.serial_source!r}")
        if self.design not in ("within", "between_task"):
            raise ValueError(f"unknown design {self.design!r}")
        if self.image_root is not None and not Path(self.image_root).is_dir():
            raise ValueError(f"image root {self.image_root!r} is not a directory")

    @property
    def tick_ms(self) -> float:
        return 1000.0 / self.tick_rate_hz

    def to_dict(self) -> dict:
        d = asdict(self)
        d["mode"] = mode_to_dict(self.mode)
        d["layout"] = {
            "video_deg": list(self.layout.video_deg),
            "image_deg": list(self.layout.image_deg),
            "help_deg": list(self.layout.help_deg),
            "distance": self.layout.distance,
            "gap_deg": self.layout.gap_deg,
        }
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "SessionConfig":
        d = dict(d)
        if "mode" in d:
            d["mode"] = mode_from_dict(d["mode"])
        if "layout" in d:
            lay = dict(d["layout"])
            for key in ("video_deg", "image_deg", "help_deg"):
                if key in lay:
                    lay[key] = tuple(lay[key])
            d["layout"] = LayoutConfig(**lay)
        return cls(**d)

    @classmethod
    def from_json(cls, path: Path) -> "SessionConfig":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))
