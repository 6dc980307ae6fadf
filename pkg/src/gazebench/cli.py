"""Command-line entry point.

    gazebench serve   --config cfg.json --port 8765 [--ui-dir frontend/dist]
    gazebench replay  --replay sessions/<id>/log.jsonl
    gazebench trial   --scripted-trial script.json [--out results/]
    gazebench sweep   --participant 0 [--design within] [--out results/]

`trial` runs one scripted trial from a JSON document {condition, task?,
seed?}; `sweep` runs a participant's full schedule with the synthetic
perfect user and writes per-trial JSON plus a results CSV.
"""

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

from .config import SessionConfig
from .replay import parse_log, replay_engine
from .schedule import Condition, Design, condition_schedule
from .tasks import generate_task
from .trials import perfect_user_script, run_scripted_trial


def _load_config(path: str | None) -> SessionConfig:
    if path:
        return SessionConfig.from_json(Path(path))
    return SessionConfig()


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    config = _load_config(args.config)
    ui_dir = Path(args.ui_dir) if args.ui_dir else None
    app = create_app(config, ui_dir=ui_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def _cmd_replay(args) -> int:
    path = Path(args.replay)
    parsed = parse_log(path, strict=False)
    for line_no, err in parsed.errors:
        print(f"line {line_no}: {err}", file=sys.stderr)
    engine = replay_engine(parsed)
    print(engine.serialize_snapshot())
    print(
        f"replayed {engine.tick_id} ticks, {len(engine.results)} trial result(s), "
        f"{len(parsed.errors)} bad line(s)",
        file=sys.stderr,
    )
    return 0 if not parsed.errors else 1


def _run_one(condition: Condition, seed: int, config: SessionConfig, out: Path | None):
    image_root = out / "images" if out else None
    task = generate_task(condition.task_kind, condition.level, seed, image_root=image_root)
    gaze, script = perfect_user_script(condition, task, config)
    log_path = out / f"trial_{condition.label().replace('/', '_')}.jsonl" if out else None
    result, _engine = run_scripted_trial(
        condition, gaze, script, task, config, log_path=log_path, persist_dir=out
    )
    return result


def _cmd_trial(args) -> int:
    with open(args.scripted_trial) as fh:
        doc = json.load(fh)
    condition = Condition.from_dict(doc["condition"])
    config = _load_config(args.config)
    out = Path(args.out) if args.out else None
    result = _run_one(condition, int(doc.get("seed", config.task_seed)), config, out)
    print(json.dumps(result.to_dict(), sort_keys=True, indent=1))
    return 0


def _cmd_sweep(args) -> int:
    config = _load_config(args.config)
    out = Path(args.out) if args.out else None
    if out:
        out.mkdir(parents=True, exist_ok=True)
    conditions = condition_schedule(args.participant, Design(args.design))
    rows = []
    for i, condition in enumerate(conditions):
        result = _run_one(condition, config.task_seed + i, config, out)
        rows.append(result)
        print(
            f"[{i + 1:2d}/{len(conditions)}] {condition.label():32s} "
            f"acc={result.accuracy:.2f} time={result.time_ms / 1000.0:6.1f}s "
            f"head={result.head_path_deg:7.1f}deg"
        )
    if out:
        with open(out / "results.csv", "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(
                ["mode", "task_kind", "level", "time_ms", "precision_mean",
                 "accuracy", "head_path_deg"]
            )
            for r in rows:
                writer.writerow(
                    [r.condition.mode.describe(), r.condition.task_kind.value,
                     r.condition.level.value, r.time_ms, r.precision_mean,
                     r.accuracy, r.head_path_deg]
                )
        print(f"wrote {out / 'results.csv'}")
    return 0


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    parser = argparse.ArgumentParser(prog="gazebench", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_serve = sub.add_parser("serve", help="run the realtime service")
    p_serve.add_argument("--config", help="session config JSON path")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8765)
    p_serve.add_argument("--ui-dir", help="static UI bundle directory")
    p_serve.set_defaults(func=_cmd_serve)

    p_replay = sub.add_parser("replay", help="replay a session log headlessly")
    p_replay.add_argument("--replay", required=True, help="session log path (JSONL)")
    p_replay.set_defaults(func=_cmd_replay)

    p_trial = sub.add_parser("trial", help="run one scripted trial headlessly")
    p_trial.add_argument("--scripted-trial", required=True, help="trial JSON path")
    p_trial.add_argument("--config", help="session config JSON path")
    p_trial.add_argument("--out", help="output directory")
    p_trial.set_defaults(func=_cmd_trial)

    p_sweep = sub.add_parser("sweep", help="run a participant's full schedule")
    p_sweep.add_argument("--participant", type=int, default=0)
    p_sweep.add_argument("--design", default="within", choices=["within", "between_task"])
    p_sweep.add_argument("--config", help="session config JSON path")
    p_sweep.add_argument("--out", help="output directory")
    p_sweep.set_defaults(func=_cmd_sweep)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
