"""Core value types for the depth-sensing gesture pipeline.

Coordinates are image pixels: x grows rightward, y grows downward (row
index). Depth values are millimeters; 0 means "no reading".
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Tuple

import numpy as np

from holomed.errors import InputError

Point = Tuple[int, int]  # (x, y)

MIN_FRAME_SIDE = 8


class GestureKind(str, Enum):
    SWIPE_RIGHT = "SwipeRight"
    SWIPE_LEFT = "SwipeLeft"
    RAISE_BOTH = "RaiseBoth"
    HOLD_STILL = "HoldStill"
    NONE = "None"


class DistanceStatus(str, Enum):
    IN_BAND = "InBand"
    TOO_CLOSE = "TooClose"
    TOO_FAR = "TooFar"
    OUT_OF_GATE = "OutOfGate"


@dataclass(frozen=True)
class GateConfig:
    """Depth acceptance range (gate) and preferred operating band, in mm.

    Defaults: samples outside 40-150 cm are ignored entirely; the user is
    expected to stand 70-80 cm from the sensor.
    """

    gate_min: int = 400
    gate_max: int = 1500
    band_min: int = 700
    band_max: int = 800

    def __post_init__(self):
        if not (0 < self.gate_min < self.gate_max):
            raise InputError("gate range must satisfy 0 < gate_min < gate_max")
        if not (self.gate_min <= self.band_min < self.band_max <= self.gate_max):
            raise InputError("band must lie within the gate")


@dataclass
class DepthFrame:
    """One depth image: row-major millimeter samples plus a monotonic timestamp."""

    width: int
    height: int
    samples: np.ndarray  # shape (height, width)
    timestamp: int  # milliseconds

    def __post_init__(self):
        if self.width < MIN_FRAME_SIDE or self.height < MIN_FRAME_SIDE:
            raise InputError(
                f"frame must be at least {MIN_FRAME_SIDE}x{MIN_FRAME_SIDE}, "
                f"got {self.width}x{self.height}"
            )
        arr = np.asarray(self.samples)
        if arr.size != self.width * self.height:
            raise InputError(
                f"expected {self.width * self.height} samples, got {arr.size}"
            )
        self.samples = arr.reshape(self.height, self.width).astype(np.float64)

    @classmethod
    def from_flat(cls, width: int, height: int, flat, timestamp: int) -> "DepthFrame":
        return cls(width, height, np.asarray(flat, dtype=np.float64), timestamp)


@dataclass
class UserMask:
    """Largest in-gate connected region of a frame, as a boolean grid."""

    width: int
    height: int
    bits: np.ndarray  # bool, shape (height, width)
    median_depth_mm: float
    pixel_count: int

    @classmethod
    def empty(cls, width: int, height: int) -> "UserMask":
        return cls(width, height, np.zeros((height, width), dtype=bool), 0.0, 0)

    @property
    def is_empty(self) -> bool:
        return self.pixel_count == 0

    def centroid(self) -> Tuple[float, float]:
        """(col, row) mean of the set pixels. Undefined on an empty mask."""
        ys, xs = np.nonzero(self.bits)
        return float(xs.mean()), float(ys.mean())


@dataclass
class Contour:
    """Closed boundary trace of a mask: ordered (x, y) points, consecutive
    points 8-adjacent, first point the lexicographically smallest border
    point."""

    points: list

    def __len__(self):
        return len(self.points)

    def point_set(self) -> set:
        return set(self.points)


@dataclass
class HandObservation:
    """Per-frame hand reference points on the silhouette contour.

    A side is None when the silhouette had no hand-like extremum there
    (arms-down pose).
    """

    timestamp: int
    left: Optional[Point] = None
    right: Optional[Point] = None
