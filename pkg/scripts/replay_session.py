#!/usr/bin/env python3
"""Replay a recorded session log and print the final engine snapshot.

Usage: python scripts/replay_session.py sessions/<id>/log.jsonl
"""
import sys

from gazebench.cli import main

if __name__ == "__main__":
    if len(sys.argv) != 2:
        print(__doc__, file=sys.stderr)
        sys.exit(2)
    sys.exit(main(["replay", "--replay", sys.argv[1]]))
