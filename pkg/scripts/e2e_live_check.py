#!/usr/bin/env python3
"""Live end-to-end check against the real service over TCP.

Boots the service, serves the UI bundle, completes one peg-easy trial
through a real WebSocket writer client, verifies the downloaded result
equals the live one, downloads the session log and replays it through
the CLI. Exits nonzero on any mismatch.

Usage: python scripts/e2e_live_check.py [port]
"""
import asyncio
import json
import subprocess
import sys
import tempfile
import time
from pathlib import Path

import requests
import websockets

REPO = Path(__file__).resolve().parent.parent


def main() -> int:
    port = int(sys.argv[1]) if len(sys.argv) > 1 else 8923
    base = f"http://127.0.0.1:{port}"
    proc = subprocess.Popen(
        [sys.executable, "-m", "gazebench", "serve", "--port", str(port),
         "--ui-dir", str(REPO / "frontend" / "dist")],
        stdout=subprocess.DEVNULL, stderr=subprocess.DEVNULL, cwd=REPO,
    )
    try:
        for _ in range(100):
            try:
                cfg = requests.get(f"{base}/api/config", timeout=1).json()
                break
            except requests.RequestException:
                time.sleep(0.2)
        else:
            print("service never came up")
            return 1
        print("1. service up, tick rate:", cfg["tick_rate_hz"])

        if (REPO / "frontend" / "dist").is_dir():
            assert "gazebench" in requests.get(base + "/").text
            assert requests.get(base + "/main.js").status_code == 200
            print("2. UI bundle served")
        else:
            print("2. UI bundle not built; skipping static check")

        body = {"condition": {"mode": {"kind": "immediate"},
                "task_kind": "peg_transfer", "level": "easy"}, "seed": 7}
        task = requests.post(f"{base}/api/trial/start", json=body).json()["task"]
        print("3. trial started,", len(task["targets"]), "targets")

        from gazebench.schedule import Condition
        from gazebench.tasks import TaskSpec
        from gazebench.trials import perfect_user_script

        condition = Condition.from_dict(body["condition"])
        gaze, script = perfect_user_script(condition, TaskSpec.from_dict(task))
        stream = sorted(
            [{"type": "gaze", "t": s.t, "yaw": s.yaw, "pitch": s.pitch,
              "source": "mouse"} for s in gaze]
            + [{"type": "input", "t": e.t, "side": e.side, "edge": e.edge,
                "source": "remote"} for e in script],
            key=lambda m: m["t"],
        )

        async def drive():
            async with websockets.connect(f"ws://127.0.0.1:{port}/ws") as ws:
                hello = json.loads(await ws.recv())
                assert hello["role"] == "writer", hello
                for msg in stream:
                    await ws.send(json.dumps(msg))
                deadline = time.time() + 30
                while time.time() < deadline:
                    frame = json.loads(await asyncio.wait_for(ws.recv(), 5))
                    if frame.get("type") == "trial_complete":
                        return frame["result"]
                raise RuntimeError("no trial_complete within 30 s")

        live = asyncio.run(drive())
        print(f"4. trial complete: accuracy={live['accuracy']}, "
              f"time={live['time_ms']:.0f} ms, head={live['head_path_deg']:.1f} deg")
        assert live["accuracy"] == 1.0

        downloaded = requests.get(f"{base}/api/trials/{live['trial_id']}").json()
        assert json.dumps(downloaded, sort_keys=True) == json.dumps(live, sort_keys=True)
        print("5. downloaded result == live result")

        assert "peg_transfer,easy" in requests.get(f"{base}/api/results.csv").text
        sessions = requests.get(f"{base}/api/sessions").json()["sessions"]
        log_text = requests.get(f"{base}/api/sessions/{sessions[-1]}/log").text
        print("6. CSV + session log downloadable:", len(log_text.splitlines()), "lines")
    finally:
        proc.terminate()
        proc.wait(timeout=5)

    with tempfile.NamedTemporaryFile("w", suffix=".jsonl", delete=False) as fh:
        fh.write(log_text)
        log_path = fh.name
    out = subprocess.run(
        [sys.executable, "-m", "gazebench", "replay", "--replay", log_path],
        capture_output=True, text=True, cwd=REPO,
    )
    assert out.returncode == 0, out.stderr
    final = json.loads(out.stdout)
    assert final["results"] == 1 and final["captures"] == 1
    print("7. CLI replay of the downloaded log: OK")
    print("END-TO-END CHECK: PASS")
    return 0


if __name__ == "__main__":
    sys.exit(main())
