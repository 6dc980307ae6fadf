#!/usr/bin/env python3
"""Run one participant's full condition schedule with the synthetic user.

Writes per-trial JSON, session logs and a results CSV under --out.

Usage: python scripts/run_scripted_experiment.py [--participant 0]
       [--design within|between_task] [--out results/p0]
"""
import sys

from gazebench.cli import main

if __name__ == "__main__":
    argv = sys.argv[1:]
    if "--out" not in argv:
        argv += ["--out", "results/scripted"]
    sys.exit(main(["sweep", *argv]))
