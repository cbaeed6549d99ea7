"""Clock abstraction. All timestamps are UTC milliseconds since the epoch."""

from __future__ import annotations

import threading
import time

MINUTE_MS = 60_000
HOUR_MS = 60 * MINUTE_MS
DAY_MS = 24 * HOUR_MS


class Clock:
    """Source of time for every TTL, rate gate, and retry delay."""

    def now_ms(self) -> int:
        raise NotImplementedError

    def sleep_ms(self, duration_ms: float) -> None:
        raise NotImplementedError


class SystemClock(Clock):
    def now_ms(self) -> int:
        return int(time.time() * 1000)

    def sleep_ms(self, duration_ms: float) -> None:
        if duration_ms > 0:
            time.sleep(duration_ms / 1000.0)


class ManualClock(Clock):
    """Deterministic clock for tests and fixture mode. sleep advances time."""

    def __init__(self, start_ms: int = 0):
        self._now = int(start_ms)
        self._lock = threading.Lock()

    def now_ms(self) -> int:
        with self._lock:
            return self._now

    def sleep_ms(self, duration_ms: float) -> None:
        self.advance(duration_ms)

    def advance(self, duration_ms: float) -> None:
        with self._lock:
            self._now += int(duration_ms)
