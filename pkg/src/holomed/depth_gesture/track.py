"""Bounded FIFO of hand observations with temporal smoothing.

Smoothing a position at slot t needs the observations at t-1 and t+1, so
the newest slot's smoothed point only materializes one frame later.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Optional

from holomed.depth_gesture.types import HandObservation, Point
from holomed.errors import InputError

DEFAULT_CAPACITY = 32


@dataclass
class TrackEntry:
    obs: HandObservation
    centroid_row: float = 0.0
    centroid_col: float = 0.0
    smoothed_left: Optional[Point] = None
    smoothed_right: Optional[Point] = None


def _mean3(points) -> Point:
    mx = sum(p[0] for p in points) / 3.0
    my = sum(p[1] for p in points) / 3.0
    return (int(math.floor(mx + 0.5)), int(math.floor(my + 0.5)))


class HandTrack:
    def __init__(self, capacity: int = DEFAULT_CAPACITY):
        if capacity < 3:
            raise InputError("track capacity must allow a 3-frame window")
        self.capacity = capacity
        self.entries: deque[TrackEntry] = deque(maxlen=capacity)

    def __len__(self) -> int:
        return len(self.entries)

    def append(
        self,
        obs: HandObservation,
        centroid_row: float = 0.0,
        centroid_col: float = 0.0,
    ) -> None:
        if self.entries and obs.timestamp <= self.entries[-1].obs.timestamp:
            raise InputError(
                f"timestamps must strictly increase ({obs.timestamp} after "
                f"{self.entries[-1].obs.timestamp})"
            )
        self.entries.append(TrackEntry(obs, centroid_row, centroid_col))
        self._smooth_newest_interior()

    def _smooth_newest_interior(self) -> None:
        # slot len-2 just gained its t+1 neighbor
        i = len(self.entries) - 2
        if i < 1:
            return
        entry = self.entries[i]
        for side in ("left", "right"):
            triple = [getattr(self.entries[j].obs, side) for j in (i - 1, i, i + 1)]
            if all(p is not None for p in triple):
                setattr(entry, f"smoothed_{side}", _mean3(triple))

    def flush(self) -> None:
        self.entries.clear()
