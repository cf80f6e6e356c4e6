from holomed.projection.schedule import (
    FACE_ORDER,
    FaceEntry,
    FrameSchedule,
    PyramidGeometry,
    build_schedule,
    face_views,
    frame_index,
    perspective_factor,
)
from holomed.projection.sheets import (
    TOTAL_FRAMES,
    Pack,
    SpriteSheet,
    generate_pack,
    load_pack,
)
from holomed.projection.ticker import MonotonicClock, VirtualClock, tick_loop

__all__ = [
    "FACE_ORDER",
    "FaceEntry",
    "FrameSchedule",
    "MonotonicClock",
    "Pack",
    "PyramidGeometry",
    "SpriteSheet",
    "TOTAL_FRAMES",
    "VirtualClock",
    "build_schedule",
    "face_views",
    "frame_index",
    "generate_pack",
    "load_pack",
    "perspective_factor",
    "tick_loop",
]
