"""Session log parsing and deterministic replay.

A session log is JSON Lines: a header record (version, config, initial
image folders), then per-tick message records, then an end record with
the final tick.  Replay rebuilds an engine from the header and re-applies
every message at its original tick, reproducing the live snapshot
sequence byte for byte, with no devices or clients attached.
"""

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, List, Optional, Tuple

from .browser import Folder
from .config import SessionConfig
from .engine import Engine, SessionLog


class ReplayError(RuntimeError):
    pass


class LogVersionError(ReplayError):
    pass


@dataclass
class ParsedLog:
    config: SessionConfig
    folders: List[Folder]
    ticks: List[Tuple[int, List[dict]]]  # (tick id, messages), ascending
    final_tick: Optional[int]
    errors: List[Tuple[int, str]] = field(default_factory=list)  # (line no, error)


def parse_log(path: Path, strict: bool = False) -> ParsedLog:
    """Read a session log, collecting malformed lines as (line_no, error).

    With strict=True the first malformed line raises ReplayError instead.
    """
    header = None
    ticks: List[Tuple[int, List[dict]]] = []
    errors: List[Tuple[int, str]] = []
    final_tick: Optional[int] = None

    def bad(line_no: int, message: str) -> None:
        if strict:
            raise ReplayError(f"line {line_no}: {message}")
        errors.append((line_no, message))

    with open(path) as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                bad(line_no, f"invalid JSON: {exc.msg}")
                continue
            if not isinstance(record, dict):
                bad(line_no, "record is not an object")
                continue
            rtype = record.get("type")
            if rtype == "header":
                if record.get("version") != SessionLog.VERSION:
                    raise LogVersionError(
                        f"log version {record.get('version')!r} != {SessionLog.VERSION}"
                    )
                header = record
            elif rtype == "tick":
                pass  # informational; grouping comes from per-message tick fields
            elif rtype == "msg":
                try:
                    tick = int(record["tick"])
                    msg = record["msg"]
                except (KeyError, TypeError, ValueError):
                    bad(line_no, "malformed msg record")
                    continue
                if ticks and ticks[-1][0] == tick:
                    ticks[-1][1].append(msg)
                elif ticks and ticks[-1][0] > tick:
                    bad(line_no, f"tick {tick} out of order")
                else:
                    ticks.append((tick, [msg]))
            elif rtype == "end":
                final_tick = int(record.get("tick", 0))
            else:
                bad(line_no, f"unknown record type {rtype!r}")

    if header is None:
        raise ReplayError("log has no header record")

    config_dict = dict(header.get("config", {}))
    # Paths recorded at capture time may no longer exist; replay feeds the
    # browser from the header's folder listing instead.
    config_dict["image_root"] = None
    config = SessionConfig.from_dict(config_dict)
    folders = [
        Folder(f["name"], list(f["images"])) for f in header.get("folders", [])
    ]
    return ParsedLog(config, folders, ticks, final_tick, errors)


def replay_engine(parsed: ParsedLog) -> Engine:
    """Re-execute a parsed log and return the engine in its final state."""
    engine = Engine(parsed.config, folders=parsed.folders)
    for tick, messages in parsed.ticks:
        while engine.tick_id < tick:
            engine.step()
        engine.step(messages)
    if parsed.final_tick is not None:
        while engine.tick_id < parsed.final_tick:
            engine.step()
    return engine


def replay_snapshots(path: Path, strict: bool = False) -> Iterator[dict]:
    """Stream the snapshot sequence a live client would have seen."""
    parsed = parse_log(path, strict=strict)
    engine = Engine(parsed.config, folders=parsed.folders)
    by_tick = dict(parsed.ticks)
    last = parsed.final_tick
    if last is None:
        last = max(by_tick) + 1 if by_tick else 0
    while engine.tick_id < last:
        engine.step(by_tick.get(engine.tick_id, ()))
        yield engine.snapshot()
