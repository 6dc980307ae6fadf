#!/usr/bin/env python3
"""Start the realtime service with the browser UI bundle, if built.

Usage: python scripts/run_service.py [--port 8765] [--config cfg.json]
"""
import sys
from pathlib import Path

from gazebench.cli import main

if __name__ == "__main__":
    args = sys.argv[1:]
    ui_dist = Path(__file__).resolve().parent.parent / "frontend" / "dist"
    if ui_dist.is_dir() and "--ui-dir" not in args:
        args += ["--ui-dir", str(ui_dist)]
    sys.exit(main(["serve", *args]))
