"""Real-time service: WebSocket state streaming plus HTTP control endpoints.

The engine runs inside one asyncio task that ticks at the configured
rate; network handlers only enqueue messages, the tick task is the sole
mutator.  The first connected client may write (send gaze/input/control
messages); later connections are read-only observers whose inputs are
rejected with an error message.  Static files (the browser UI bundle)
are served from `ui_dir` when present.

Wire messages inbound: the engine message format (see engine module)
plus {"type": "hello", "role": "writer"|"observer"}.  Outbound:
snapshots, {"type": "hello_ack", ...}, {"type": "error", ...} and
{"type": "trial_complete", "result": ...}.
"""

import asyncio
import csv
import io
import json
import logging
import time
import uuid
from contextlib import asynccontextmanager
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from fastapi import FastAPI, HTTPException, WebSocket, WebSocketDisconnect
from fastapi.responses import FileResponse, JSONResponse, PlainTextResponse
from fastapi.staticfiles import StaticFiles

from .config import SessionConfig
from .engine import Engine, SessionLog
from .inputs import SerialParser, Source
from .replay import parse_log
from .schedule import Condition, Design, condition_schedule
from .tasks import TaskKind, Level, generate_task
from .serialio import SerialReader

log = logging.getLogger(__name__)


class EngineHost:
    """Owns the engine, its message queue and the tick task."""

    def __init__(self, config: SessionConfig):
        self.config = config
        self.engine: Optional[Engine] = None
        self.queue: List[dict] = []
        self.clients: Dict[int, WebSocket] = {}
        self.writer_id: Optional[int] = None
        self._next_client_id = 1
        self._tick_task: Optional[asyncio.Task] = None
        self.session_id: Optional[str] = None
        self.session_dir: Optional[Path] = None
        self._serial: Optional[SerialReader] = None
        self._serial_parser: Optional[SerialParser] = None
        self._loop: Optional[asyncio.AbstractEventLoop] = None

    # -- session lifecycle ---------------------------------------------------

    def start_session(self) -> str:
        self.stop_session()
        self.session_id = time.strftime("%Y%m%d-%H%M%S-") + uuid.uuid4().hex[:6]
        self.session_dir = Path(self.config.output_dir) / self.session_id
        self.session_dir.mkdir(parents=True, exist_ok=True)
        session_log = SessionLog(self.session_dir / "log.jsonl")
        self.engine = Engine(
            self.config, session_log=session_log, persist_dir=self.session_dir
        )
        self.queue.clear()
        if self.config.serial_device:
            self._open_serial()
        return self.session_id

    def stop_session(self) -> None:
        if self._serial is not None:
            self._serial.stop()
            self._serial = None
        if self.engine is not None:
            self.engine.close()
            self.engine = None
        self.session_id = None

    def _open_serial(self) -> None:
        source = Source.PEDAL if self.config.serial_source == "pedal" else Source.RING
        self._serial_parser = SerialParser(source)

        def on_bytes(data: bytes, t_ms: float) -> None:
            events = self._serial_parser.feed(data, t_ms)
            if events and self._loop is not None:
                msgs = [dict(e.to_dict(), type="input") for e in events]
                self._loop.call_soon_threadsafe(self.queue.extend, msgs)

        self._serial = SerialReader(self.config.serial_device, on_bytes)
        try:
            self._serial.start()
        except OSError as exc:
            self._serial = None
            log.error("cannot open serial device %s: %s", self.config.serial_device, exc)

    # -- tick loop --------------------------------------------------------------

    async def run_ticks(self) -> None:
        self._loop = asyncio.get_running_loop()
        interval = self.config.tick_ms / 1000.0
        next_t = self._loop.time() + interval
        while True:
            delay = next_t - self._loop.time()
            if delay > 0:
                await asyncio.sleep(delay)
            next_t += interval
            engine = self.engine
            if engine is None:
                continue
            msgs, self.queue = self.queue, []
            results_before = len(engine.results)
            engine.step(msgs)
            payload = engine.serialize_snapshot()
            await self._broadcast_text(payload)
            if len(engine.results) > results_before:
                done = {
                    "type": "trial_complete",
                    "result": engine.results[-1].to_dict(),
                }
                await self._broadcast_text(json.dumps(done, sort_keys=True))

    async def _broadcast_text(self, payload: str) -> None:
        dead = []
        for cid, sock in self.clients.items():
            try:
                await sock.send_text(payload)
            except Exception:
                dead.append(cid)
        for cid in dead:
            self._drop_client(cid)

    # -- clients ------------------------------------------------------------------

    def register(self, sock: WebSocket) -> Tuple[int, str]:
        cid = self._next_client_id
        self._next_client_id += 1
        self.clients[cid] = sock
        if self.writer_id is None:
            self.writer_id = cid
            return cid, "writer"
        return cid, "observer"

    def _drop_client(self, cid: int) -> None:
        self.clients.pop(cid, None)
        if self.writer_id == cid:
            self.writer_id = None
            # Promote the oldest surviving observer.
            if self.clients:
                self.writer_id = min(self.clients)

    def submit(self, cid: int, msg: dict) -> Optional[str]:
        """Queue a message from a client; returns an error string if rejected."""
        if cid != self.writer_id:
            return "read-only observer: inputs rejected"
        if self.engine is None:
            return "no active session"
        self.queue.append(msg)
        return None


def create_app(
    config: Optional[SessionConfig] = None, ui_dir: Optional[Path] = None
) -> FastAPI:
    config = config or SessionConfig()
    host = EngineHost(config)

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        host.start_session()
        task = asyncio.create_task(host.run_ticks())
        yield
        task.cancel()
        host.stop_session()

    app = FastAPI(title="gazebench", lifespan=lifespan)
    app.state.host = host

    # -- control endpoints ------------------------------------------------------

    @app.get("/api/config")
    def get_config():
        return host.config.to_dict()

    @app.post("/api/session/start")
    def session_start():
        sid = host.start_session()
        return {"session_id": sid}

    @app.post("/api/session/stop")
    def session_stop():
        host.stop_session()
        return {"stopped": True}

    @app.get("/api/schedule")
    def get_schedule(participant: int = 0, design: str = "within"):
        conditions = condition_schedule(participant, Design(design))
        return {"conditions": [c.to_dict() for c in conditions]}

    @app.post("/api/trial/start")
    async def trial_start(body: dict):
        if host.engine is None:
            raise HTTPException(409, "no active session")
        try:
            condition = Condition.from_dict(body["condition"])
        except (KeyError, ValueError) as exc:
            raise HTTPException(422, f"bad condition: {exc}")
        seed = int(body.get("seed", host.config.task_seed))
        task = generate_task(
            condition.task_kind,
            condition.level,
            seed,
            image_root=host.session_dir / "images" if host.session_dir else None,
        )
        host.queue.append(
            {
                "type": "control",
                "action": "start_trial",
                "condition": condition.to_dict(),
                "task": task.to_dict(),
            }
        )
        return {"queued": True, "task": task.to_dict()}

    @app.post("/api/trial/abort")
    def trial_abort():
        if host.engine is None:
            raise HTTPException(409, "no active session")
        host.queue.append({"type": "control", "action": "abort_trial"})
        return {"queued": True}

    @app.get("/api/trials")
    def list_trials():
        engine = host.engine
        if engine is None:
            return {"results": []}
        return {"results": [r.to_dict() for r in engine.results]}

    @app.get("/api/trials/{trial_id}")
    def get_trial(trial_id: int):
        engine = host.engine
        if engine is not None:
            for r in engine.results:
                if r.trial_id == trial_id:
                    return r.to_dict()
        raise HTTPException(404, f"no trial {trial_id}")

    @app.get("/api/results.csv")
    def results_csv():
        engine = host.engine
        rows = [r.to_dict() for r in (engine.results if engine else [])]
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(
            [
                "trial_id", "mode", "task_kind", "level", "seed", "time_ms",
                "precision_mean", "accuracy", "head_path_deg", "completed", "aborted",
            ]
        )
        for r in rows:
            mode = r["condition"]["mode"]
            mode_label = mode["kind"] + (
                f"-{mode.get('window', mode.get('ratio', ''))}" if mode["kind"] != "immediate" else ""
            )
            writer.writerow(
                [
                    r["trial_id"], mode_label, r["condition"]["task_kind"],
                    r["condition"]["level"], r["task"]["seed"], r["time_ms"],
                    r["precision_mean"], r["accuracy"], r["head_path_deg"],
                    r["completed"], r["aborted"],
                ]
            )
        return PlainTextResponse(buf.getvalue(), media_type="text/csv")

    @app.get("/api/media")
    def get_media(path: str):
        """Serve an image referenced by the browser state.

        Restricted to files under the output directory or the configured
        image root; anything else is rejected.
        """
        requested = Path(path).resolve()
        allowed = [Path(host.config.output_dir).resolve()]
        if host.config.image_root:
            allowed.append(Path(host.config.image_root).resolve())
        if not any(requested.is_relative_to(root) for root in allowed):
            raise HTTPException(403, "path outside served roots")
        if not requested.is_file():
            raise HTTPException(404, f"no such file {path!r}")
        return FileResponse(requested)

    @app.get("/api/sessions")
    def list_sessions():
        out_dir = Path(host.config.output_dir)
        if not out_dir.is_dir():
            return {"sessions": []}
        return {"sessions": sorted(p.name for p in out_dir.iterdir() if p.is_dir())}

    @app.get("/api/sessions/{session_id}/log")
    def get_session_log(session_id: str):
        path = Path(host.config.output_dir) / session_id / "log.jsonl"
        if not path.is_file():
            raise HTTPException(404, f"no log for session {session_id}")
        return FileResponse(path, media_type="application/jsonl")

    @app.get("/api/sessions/{session_id}/log/errors")
    def get_session_log_errors(session_id: str):
        path = Path(host.config.output_dir) / session_id / "log.jsonl"
        if not path.is_file():
            raise HTTPException(404, f"no log for session {session_id}")
        parsed = parse_log(path, strict=False)
        return {"errors": [{"line": ln, "error": msg} for ln, msg in parsed.errors]}

    # -- realtime channel ----------------------------------------------------------

    @app.websocket("/ws")
    async def ws_endpoint(sock: WebSocket):
        await sock.accept()
        cid, role = host.register(sock)
        await sock.send_text(
            json.dumps(
                {
                    "type": "hello_ack",
                    "client_id": cid,
                    "role": role,
                    "config": host.config.to_dict(),
                },
                sort_keys=True,
            )
        )
        try:
            while True:
                raw = await sock.receive_text()
                try:
                    msg = json.loads(raw)
                    if not isinstance(msg, dict):
                        raise ValueError("message must be an object")
                except ValueError as exc:
                    await sock.send_text(
                        json.dumps({"type": "error", "message": f"bad message: {exc}"})
                    )
                    continue
                if msg.get("type") == "hello":
                    continue  # role was assigned at connect time
                err = host.submit(cid, msg)
                if err is not None:
                    await sock.send_text(json.dumps({"type": "error", "message": err}))
        except WebSocketDisconnect:
            pass
        finally:
            host._drop_client(cid)

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
