"""Depth-frame operations: segmentation, contour, hand location, smoothing,
swipe classification and distance gating."""

from __future__ import annotations

import math
from typing import Optional, Tuple

import numpy as np

from holomed.depth_gesture import kernels
from holomed.depth_gesture.track import HandTrack
from holomed.depth_gesture.types import (
    Contour,
    DepthFrame,
    DistanceStatus,
    GateConfig,
    GestureKind,
    HandObservation,
    Point,
    UserMask,
)
from holomed.errors import InputError

DEFAULT_WINDOW_MS = 800
DEFAULT_THRESHOLD_FRAC = 0.25
HAND_CENTROID_MARGIN_PX = 2.0
# held poses (RaiseBoth, HoldStill) must cover this much of the window;
# otherwise any 3-frame pause would fire them mid-swipe
SUSTAIN_FRACTION = 0.75


def _round_half_up(v: float) -> int:
    return int(math.floor(v + 0.5))


def segment_user(frame: DepthFrame, gate: GateConfig) -> UserMask:
    """Median-filter the frame, keep in-gate pixels, return the largest
    4-connected region with its median depth.

    Returns an empty mask when nothing lies inside the gate.
    """
    samples = np.asarray(frame.samples, dtype=np.float64)
    if samples.shape != (frame.height, frame.width):
        raise InputError(
            f"frame claims {frame.width}x{frame.height}, samples are {samples.shape}"
        )
    filtered = kernels.median_filter3(samples)
    in_gate = (filtered >= gate.gate_min) & (filtered <= gate.gate_max)
    bits, count = kernels.largest_component(in_gate)
    if count == 0:
        return UserMask.empty(frame.width, frame.height)
    median_depth = float(np.median(filtered[bits]))
    return UserMask(frame.width, frame.height, bits, median_depth, count)


def trace_contour(mask: UserMask) -> Contour:
    """Boundary of a non-empty mask, as an ordered closed point list."""
    if mask.is_empty:
        raise InputError("cannot trace the contour of an empty mask")
    points = kernels.trace_contour(np.asarray(mask.bits, dtype=np.uint8))
    return Contour([(int(x), int(y)) for x, y in points])


def locate_hands(contour: Contour, mask: UserMask, timestamp: int = 0) -> HandObservation:
    """Hand reference points: the x-extremal contour points above the
    silhouette's vertical centroid.

    A side is dropped when its extremum sits within 2 px of the horizontal
    centroid (arms hanging along the body). Ties on x pick the smaller y.
    """
    centroid_col, centroid_row = mask.centroid()
    band = [(x, y) for x, y in contour.points if y < centroid_row]
    if not band:
        return HandObservation(timestamp=timestamp)
    right = max(band, key=lambda p: (p[0], -p[1]))
    left = min(band, key=lambda p: (p[0], p[1]))
    obs = HandObservation(timestamp=timestamp)
    if abs(right[0] - centroid_col) > HAND_CENTROID_MARGIN_PX:
        obs.right = right
    if abs(left[0] - centroid_col) > HAND_CENTROID_MARGIN_PX:
        obs.left = left
    return obs


def smooth_position(track: HandTrack, t: int, side: str = "right") -> Optional[Point]:
    """Mean of the observed positions at window slots t-1, t, t+1, rounded
    half-up. None when a neighbor slot or the side is missing (caller
    retries on the next frame)."""
    entries = track.entries
    if t - 1 < 0 or t + 1 >= len(entries):
        return None
    triple = []
    for i in (t - 1, t, t + 1):
        p = getattr(entries[i].obs, side)
        if p is None:
            return None
        triple.append(p)
    mx = sum(p[0] for p in triple) / 3.0
    my = sum(p[1] for p in triple) / 3.0
    return (_round_half_up(mx), _round_half_up(my))


def classify_gesture(
    track: HandTrack,
    threshold_px: float,
    window_ms: int = DEFAULT_WINDOW_MS,
) -> GestureKind:
    """Classify the trailing evaluation window of smoothed hand positions.

    A swipe fires when the right hand's net x-displacement reaches the
    threshold within any trailing sub-window. The held poses need sustained
    evidence covering most of the window: RaiseBoth when both hands stay at
    least one threshold above the body centroid throughout, HoldStill when
    nothing moved more than a quarter threshold. Precedence: swipe, raise,
    hold. On any hit the window is flushed so a single motion cannot fire
    twice.
    """
    series = [e for e in track.entries if e.smoothed_right is not None]
    if not series:
        return GestureKind.NONE
    newest_ts = series[-1].obs.timestamp
    window = [e for e in series if e.obs.timestamp >= newest_ts - window_ms]
    if len(window) < 3:
        return GestureKind.NONE

    kind = GestureKind.NONE
    last_x = window[-1].smoothed_right[0]
    # most recent qualifying sub-window decides; symmetric under mirroring
    for i in range(len(window) - 2, -1, -1):
        net = last_x - window[i].smoothed_right[0]
        if net >= threshold_px:
            kind = GestureKind.SWIPE_RIGHT
            break
        if net <= -threshold_px:
            kind = GestureKind.SWIPE_LEFT
            break

    span_ms = window[-1].obs.timestamp - window[0].obs.timestamp
    sustained = span_ms >= SUSTAIN_FRACTION * window_ms

    if kind is GestureKind.NONE and sustained:
        raised = all(
            e.smoothed_left is not None
            and e.smoothed_right[1] <= e.centroid_row - threshold_px
            and e.smoothed_left[1] <= e.centroid_row - threshold_px
            for e in window
        )
        if raised:
            kind = GestureKind.RAISE_BOTH

    if kind is GestureKind.NONE and sustained:
        pts = [e.smoothed_right for e in window]
        spread = max(
            math.dist(a, b) for i, a in enumerate(pts) for b in pts[i:]
        )
        if spread <= threshold_px / 4.0:
            kind = GestureKind.HOLD_STILL

    if kind is not GestureKind.NONE:
        track.flush()
    return kind


def distance_status(mask: UserMask, gate: GateConfig) -> DistanceStatus:
    """Where the segmented user stands relative to the operating band."""
    if mask.is_empty:
        return DistanceStatus.OUT_OF_GATE
    if mask.median_depth_mm < gate.band_min:
        return DistanceStatus.TOO_CLOSE
    if mask.median_depth_mm > gate.band_max:
        return DistanceStatus.TOO_FAR
    return DistanceStatus.IN_BAND
