"""gazebench: a deterministic head-gaze interaction engine and experiment bench.

Reimplements a gaze+button annotation workbench as a headless engine: a
reticle stabilization filter stage, an egocentric panel scene with ray
hit testing, a press-drag-release annotation machine, an image browser,
a two-button input bridge, the trial/metric harness and a realtime
WebSocket service for the browser UI.
"""

__version__ = "0.1.0"
