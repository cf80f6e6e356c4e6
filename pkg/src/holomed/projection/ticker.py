"""Timer-driven tick loop emitting one schedule per tick.

The tick number is derived from elapsed time against a clock abstraction,
so a stalled consumer makes the loop skip ahead instead of replaying old
frames, and tests can drive a virtual clock for deterministic traces.
"""

from __future__ import annotations

import asyncio
import time

from holomed.errors import HolomedError
from holomed.projection.schedule import _check_fps


class SinkClosed(HolomedError):
    """Raised by a sink to signal the consumer is permanently gone."""


class MonotonicClock:
    def now_ms(self) -> float:
        return time.monotonic() * 1000.0

    async def sleep_until(self, deadline_ms: float) -> None:
        delay = (deadline_ms - self.now_ms()) / 1000.0
        if delay > 0:
            await asyncio.sleep(delay)


class VirtualClock:
    """Manually advanced clock; sleeping jumps straight to the deadline."""

    def __init__(self, start_ms: float = 0.0):
        self._now = start_ms

    def now_ms(self) -> float:
        return self._now

    def advance(self, ms: float) -> None:
        self._now += ms

    async def sleep_until(self, deadline_ms: float) -> None:
        if deadline_ms > self._now:
            self._now = deadline_ms
        await asyncio.sleep(0)


async def tick_loop(clock, fps: int, emit, stop: asyncio.Event) -> str:
    """Call ``await emit(tick)`` once per tick until stopped.

    Returns the terminal reason: "stopped" on a stop signal, "sink-closed"
    when the sink reports it is gone. Ticks skipped while emit blocked are
    caught up by elapsed time, never replayed.
    """
    fps = _check_fps(fps)
    period = 1000.0 / fps
    start = clock.now_ms()
    tick = 0
    while not stop.is_set():
        try:
            await emit(tick)
        except SinkClosed:
            return "sink-closed"
        next_tick = tick + 1
        await clock.sleep_until(start + next_tick * period)
        elapsed_ticks = int((clock.now_ms() - start) // period)
        tick = max(next_tick, elapsed_ticks)
    return "stopped"
