"""End-to-end latency instrumentation.

A sample opens when a gesture submission arrives and closes when its
evaluation goes out on the broadcast channel. All comparative timestamps
come from the server's monotonic clock; t_capture is the sender's clock
and is informational only, never subtracted against server times.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Dict, Iterable, List

from holomed.errors import InputError

METRICS = ("gesture_to_render", "gesture_to_eval")


@dataclass
class LatencySample:
    gesture_seq: int
    stage_index: int
    t_capture: float
    t_received: float
    t_evaluated: float
    t_broadcast: float

    def __post_init__(self):
        if not (self.t_received <= self.t_evaluated <= self.t_broadcast):
            raise InputError(
                "latency sample must satisfy t_received <= t_evaluated <= t_broadcast"
            )

    @property
    def gesture_to_render(self) -> float:
        return self.t_broadcast - self.t_received

    @property
    def gesture_to_eval(self) -> float:
        return self.t_evaluated - self.t_received

    def as_body(self) -> Dict:
        return {
            "gesture_seq": self.gesture_seq,
            "stage_index": self.stage_index,
            "t_capture": self.t_capture,
            "t_received": self.t_received,
            "t_evaluated": self.t_evaluated,
            "t_broadcast": self.t_broadcast,
        }


def _stats(values: List[float]) -> Dict:
    return {
        "avg": sum(values) / len(values),
        "min": min(values),
        "max": max(values),
    }


def measure_latency(samples: Iterable[LatencySample]) -> Dict:
    """Mean/min/max per metric, overall and per stage. Empty input gives an
    empty report."""
    samples = list(samples)
    if not samples:
        return {"count": 0, "overall": {}, "per_stage": {}}
    report = {"count": len(samples), "overall": {}, "per_stage": {}}
    for metric in METRICS:
        report["overall"][metric] = _stats([getattr(s, metric) for s in samples])
    stages = sorted({s.stage_index for s in samples})
    for stage in stages:
        subset = [s for s in samples if s.stage_index == stage]
        report["per_stage"][str(stage)] = {
            metric: _stats([getattr(s, metric) for s in subset]) for metric in METRICS
        }
    return report


class LatencyLog:
    def __init__(self):
        self._samples: List[LatencySample] = []
        self._lock = threading.Lock()

    def add(self, sample: LatencySample) -> None:
        with self._lock:
            self._samples.append(sample)

    def samples(self) -> List[LatencySample]:
        with self._lock:
            return list(self._samples)

    def report(self) -> Dict:
        return measure_latency(self.samples())
