"""Frame-stream pipeline: segmentation -> gating -> tracking -> classification.

One pipeline instance per input stream. Frames outside the operating band
still report their distance status but contribute no hand observations, so
classification only ever sees in-band data.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from holomed.depth_gesture import ops
from holomed.depth_gesture.track import HandTrack
from holomed.depth_gesture.types import (
    DepthFrame,
    DistanceStatus,
    GateConfig,
    GestureKind,
    UserMask,
)
from holomed.errors import InputError


@dataclass
class GestureEvent:
    timestamp: int
    kind: GestureKind
    median_depth_mm: float
    status: DistanceStatus

    def as_line(self) -> str:
        return f"{self.timestamp} {self.kind.value} {self.median_depth_mm:g} {self.status.value}"


@dataclass
class FrameOutcome:
    timestamp: int
    status: DistanceStatus
    mask: UserMask
    event: Optional[GestureEvent] = None


class GesturePipeline:
    def __init__(
        self,
        gate: GateConfig = GateConfig(),
        threshold_px: Optional[float] = None,
        threshold_frac: float = ops.DEFAULT_THRESHOLD_FRAC,
        window_ms: int = ops.DEFAULT_WINDOW_MS,
        capacity: int = 32,
    ):
        self.gate = gate
        self.threshold_px = threshold_px
        self.threshold_frac = threshold_frac
        self.window_ms = window_ms
        self.track = HandTrack(capacity)
        self._last_ts: Optional[int] = None

    def process(self, frame: DepthFrame) -> FrameOutcome:
        if self._last_ts is not None and frame.timestamp <= self._last_ts:
            raise InputError(
                f"frame timestamps must strictly increase "
                f"({frame.timestamp} after {self._last_ts})"
            )
        self._last_ts = frame.timestamp

        mask = ops.segment_user(frame, self.gate)
        status = ops.distance_status(mask, self.gate)
        outcome = FrameOutcome(frame.timestamp, status, mask)
        if status is not DistanceStatus.IN_BAND:
            return outcome

        contour = ops.trace_contour(mask)
        obs = ops.locate_hands(contour, mask, timestamp=frame.timestamp)
        col, row = mask.centroid()
        self.track.append(obs, centroid_row=row, centroid_col=col)

        threshold = self.threshold_px
        if threshold is None:
            threshold = self.threshold_frac * frame.width
        kind = ops.classify_gesture(self.track, threshold, self.window_ms)
        if kind is not GestureKind.NONE:
            outcome.event = GestureEvent(
                frame.timestamp, kind, mask.median_depth_mm, status
            )
        return outcome
