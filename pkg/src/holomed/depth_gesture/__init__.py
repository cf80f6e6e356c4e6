from holomed.depth_gesture.types import (
    Contour,
    DepthFrame,
    DistanceStatus,
    GateConfig,
    GestureKind,
    HandObservation,
    UserMask,
)
from holomed.depth_gesture.ops import (
    classify_gesture,
    distance_status,
    locate_hands,
    segment_user,
    smooth_position,
    trace_contour,
)
from holomed.depth_gesture.track import HandTrack
from holomed.depth_gesture.pipeline import GestureEvent, GesturePipeline

__all__ = [
    "Contour",
    "DepthFrame",
    "DistanceStatus",
    "GateConfig",
    "GestureEvent",
    "GestureKind",
    "GesturePipeline",
    "HandObservation",
    "HandTrack",
    "UserMask",
    "classify_gesture",
    "distance_status",
    "locate_hands",
    "segment_user",
    "smooth_position",
    "trace_contour",
]
