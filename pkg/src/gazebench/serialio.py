"""Serial device reader for the two-button input hardware.

Opens a tty at 115200 baud 8N1 via termios (no third-party serial
package needed), reads raw bytes on a daemon thread and hands each chunk
to a callback together with a millisecond timestamp.  The callback is
expected to enqueue parsed events into the engine's message queue; this
thread never touches engine state directly.
"""

import logging
import os
import threading
import time
from typing import Callable, Optional

log = logging.getLogger(__name__)

BAUD = 115200


def _configure_tty(fd: int) -> None:
    import termios

    attrs = termios.tcgetattr(fd)
    # cfmakeraw equivalent: no echo/canonical mode/flow control, 8N1.
    attrs[0] = 0  # iflag
    attrs[1] = 0  # oflag
    attrs[2] = termios.CS8 | termios.CREAD | termios.CLOCAL  # cflag
    attrs[3] = 0  # lflag
    attrs[4] = termios.B115200  # ispeed
    attrs[5] = termios.B115200  # ospeed
    attrs[6][termios.VMIN] = 0
    attrs[6][termios.VTIME] = 1  # 100 ms read timeout
    termios.tcsetattr(fd, termios.TCSANOW, attrs)


class SerialReader:
    """Background reader; `on_bytes(data, t_ms)` runs on the reader thread."""

    def __init__(self, device: str, on_bytes: Callable[[bytes, float], None]):
        self.device = device
        self.on_bytes = on_bytes
        self._fd: Optional[int] = None
        self._thread: Optional[threading.Thread] = None
        self._stop = threading.Event()

    def start(self) -> None:
        self._fd = os.open(self.device, os.O_RDONLY | os.O_NOCTTY)
        try:
            _configure_tty(self._fd)
        except Exception:
            # Plain files / pipes (trace playback) are fine without tty setup.
            log.info("%s is not a tty; reading raw", self.device)
        self._thread = threading.Thread(target=self._run, daemon=True, name="serial-reader")
        self._thread.start()

    def _run(self) -> None:
        assert self._fd is not None
        while not self._stop.is_set():
            try:
                data = os.read(self._fd, 256)
            except OSError as exc:
                log.error("serial read failed: %s", exc)
                break
            if data:
                self.on_bytes(data, time.monotonic() * 1000.0)
            else:
                time.sleep(0.005)

    def stop(self) -> None:
        self._stop.set()
        if self._thread is not None:
            self._thread.join(timeout=1.0)
        if self._fd is not None:
            os.close(self._fd)
            self._fd = None
