"""Per-tick frame arithmetic and the pyramid's perspective correction."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Tuple, Union

from holomed.errors import AssetError, InputError
from holomed.projection.sheets import ROTATION_FRAMES, SpriteSheet

FPS_MIN, FPS_MAX = 25, 30
MIN_ROTATION_PERIOD_MS = 400
FINAL = "Final"

FACE_ORDER = ("front", "right", "posterior", "left")
# the left face has no captured artwork; it mirrors the right-lateral view
FACE_VIEW = {
    "front": "front",
    "right": "lateral_right",
    "posterior": "posterior",
    "left": "lateral_right",
}


@dataclass(frozen=True)
class PyramidGeometry:
    """Display geometry: face tilt (47 degrees instead of the classic 45)
    and the monitor the pyramid was proportioned for."""

    face_angle_deg: float = 47.0
    monitor_diag_inches: float = 21.0
    face_order: Tuple[str, ...] = FACE_ORDER
    # when True, faces are staggered a quarter turn each instead of showing
    # their anatomical views at a common phase
    quarter_offset_faces: bool = False

    def __post_init__(self):
        if not (40.0 < self.face_angle_deg < 50.0):
            raise InputError("face angle must lie in (40, 50) degrees")


def perspective_factor(geometry: PyramidGeometry) -> float:
    """Vertical pre-scale compensating the virtual image plane tilt.

    The reflected image plane leans (2*angle - 90) degrees from vertical,
    foreshortening the image by its cosine; pre-scaling by the inverse
    undoes it. Exactly 1.0 at the classic 45-degree face.
    """
    tilt_deg = 2.0 * geometry.face_angle_deg - 90.0
    return 1.0 / math.cos(math.radians(tilt_deg))


def frame_index(tick: int, fps: int, rotation_period_ms: int) -> int:
    """Rotation frame for a tick: floor(tick * 40000 / (fps * period)) mod 40."""
    if tick < 0:
        raise InputError("tick must be >= 0")
    fps = _check_fps(fps)
    if rotation_period_ms < MIN_ROTATION_PERIOD_MS:
        raise InputError(
            f"rotation period must be >= {MIN_ROTATION_PERIOD_MS} ms"
        )
    return (tick * ROTATION_FRAMES * 1000) // (fps * rotation_period_ms) % ROTATION_FRAMES


def _check_fps(fps) -> int:
    if isinstance(fps, float):
        if not fps.is_integer():
            raise InputError("fps must be a whole number")
        fps = int(fps)
    if not (FPS_MIN <= fps <= FPS_MAX):
        raise InputError(f"fps must lie in [{FPS_MIN}, {FPS_MAX}], got {fps}")
    return fps


@dataclass
class FaceEntry:
    face: str
    view: str
    frame_index: int
    mirrored: bool
    correction: float

    def as_payload(self) -> Dict:
        return {
            "face": self.face,
            "view": self.view,
            "frame_index": self.frame_index,
            "mirrored": self.mirrored,
            "correction": self.correction,
        }


@dataclass
class FrameSchedule:
    tick: int
    sheet_id: int
    frame_index: Union[int, str]  # 0..39 or "Final"
    faces: List[FaceEntry]
    fps: int
    session_id: str = ""

    def as_payload(self) -> Dict:
        payload = {
            "tick": self.tick,
            "sheet_id": self.sheet_id,
            "frame_index": self.frame_index,
            "faces": [f.as_payload() for f in self.faces],
            "fps": self.fps,
        }
        if self.session_id:
            payload["session_id"] = self.session_id
        return payload


def face_views(
    sheet: SpriteSheet, frame: int, geometry: PyramidGeometry
) -> List[FaceEntry]:
    """One entry per pyramid face for a rotation frame (wraps modulo the
    sheet's frame count). The left face mirrors the lateral-right view."""
    correction = perspective_factor(geometry)
    entries = []
    for i, face in enumerate(geometry.face_order):
        view = FACE_VIEW[face]
        if view not in sheet.view_offsets:
            raise AssetError(f"sheet {sheet.sheet_id} missing view block {view}")
        fi = frame
        if geometry.quarter_offset_faces and not sheet.is_final_sheet:
            fi = frame + i * (ROTATION_FRAMES // 4)
        entries.append(
            FaceEntry(
                face=face,
                view=view,
                frame_index=fi % sheet.frames,
                mirrored=face == "left",
                correction=correction,
            )
        )
    return entries


def build_schedule(
    sheet: SpriteSheet,
    tick: int,
    fps: int,
    rotation_period_ms: int,
    geometry: PyramidGeometry,
    session_id: str = "",
) -> FrameSchedule:
    if sheet.is_final_sheet:
        top: Union[int, str] = FINAL
        frame = 0
    else:
        frame = frame_index(tick, fps, rotation_period_ms)
        top = frame
    return FrameSchedule(
        tick=tick,
        sheet_id=sheet.sheet_id,
        frame_index=top,
        faces=face_views(sheet, frame, geometry),
        fps=_check_fps(fps),
        session_id=session_id,
    )
