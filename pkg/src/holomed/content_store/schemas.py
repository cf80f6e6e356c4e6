"""Per-collection body schemas.

Validation errors carry the offending field path ("stages[2].sheet_id").
Question stage references are only range-checked down here; whether they
dangle against an actual lesson is the lesson validator's job.
"""

from __future__ import annotations

from typing import Any, Dict

from holomed.errors import ValidationError
from holomed.session_core import GestureBinding


def _require(body: Dict, field: str, kind, path: str = "") -> Any:
    full = f"{path}{field}"
    if field not in body:
        raise ValidationError(full, "required field missing")
    value = body[field]
    if kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ValidationError(full, "must be a number")
        return float(value)
    if kind is int and isinstance(value, bool):
        raise ValidationError(full, "must be an integer")
    if not isinstance(value, kind):
        raise ValidationError(full, f"must be of type {kind.__name__}")
    return value


def _nonempty_str(body: Dict, field: str, path: str = "") -> str:
    value = _require(body, field, str, path)
    if not value.strip():
        raise ValidationError(f"{path}{field}", "must not be empty")
    return value


def _no_unknown(body: Dict, allowed, path: str = "") -> None:
    for key in body:
        if key not in allowed:
            raise ValidationError(f"{path}{key}", "unknown field")


def _validate_person(body: Dict) -> None:
    _nonempty_str(body, "name")
    _no_unknown(body, {"name", "notes"})


def _validate_lesson(body: Dict) -> None:
    _nonempty_str(body, "title")
    stages = _require(body, "stages", list)
    _no_unknown(body, {"title", "stages"})
    seen = set()
    for i, stage in enumerate(stages):
        path = f"stages[{i}]."
        if not isinstance(stage, dict):
            raise ValidationError(f"stages[{i}]", "must be an object")
        idx = _require(stage, "index", int, path)
        if not (1 <= idx <= 8):
            raise ValidationError(f"{path}index", "must be in 1..8")
        if idx in seen:
            raise ValidationError(f"{path}index", f"duplicate stage index {idx}")
        seen.add(idx)
        _nonempty_str(stage, "name", path)
        _require(stage, "description", str, path)
        sheet = _require(stage, "sheet_id", int, path)
        if not (1 <= sheet <= 8):
            raise ValidationError(f"{path}sheet_id", "must be in 1..8")
        _no_unknown(stage, {"index", "name", "description", "sheet_id"}, path)
    if len(seen) != 8:
        missing = sorted(set(range(1, 9)) - seen)
        raise ValidationError("stages", f"missing stage indices {missing}")


def _validate_question(body: Dict) -> None:
    _nonempty_str(body, "lesson_id")
    stage = _require(body, "stage_index", int)
    if stage < 1:
        raise ValidationError("stage_index", "must be >= 1")
    _nonempty_str(body, "prompt")
    _require(body, "correct", bool)
    if "hint" in body:
        _require(body, "hint", str)
    if "position" in body:
        pos = _require(body, "position", int)
        if pos < 0:
            raise ValidationError("position", "must be >= 0")
    _no_unknown(body, {"lesson_id", "stage_index", "prompt", "correct", "hint", "position"})


def _validate_binding(body: Dict) -> None:
    _nonempty_str(body, "name")
    mapping = _require(body, "map", dict)
    _no_unknown(body, {"name", "map"})
    GestureBinding.from_body(mapping)  # raises with a map.<kind> path


def _validate_hologram(body: Dict) -> None:
    _nonempty_str(body, "name")
    scale = _require(body, "size_scale", float)
    if scale <= 0:
        raise ValidationError("size_scale", "must be > 0")
    intensity = _require(body, "intensity", float)
    if not (0.0 <= intensity <= 1.0):
        raise ValidationError("intensity", "must be in [0, 1]")
    angle = _require(body, "angle_deg", float)
    if not (40.0 < angle < 50.0):
        raise ValidationError("angle_deg", "must be in (40, 50)")
    period = _require(body, "rotation_period_ms", int)
    if period < 400:
        raise ValidationError("rotation_period_ms", "must be >= 400 ms")
    _no_unknown(body, {"name", "size_scale", "intensity", "angle_deg", "rotation_period_ms"})


def _validate_session(body: Dict) -> None:
    _nonempty_str(body, "student_id")
    _nonempty_str(body, "lesson_id")
    _require(body, "stage_index", int)
    _require(body, "score", int)
    _nonempty_str(body, "phase")
    if "log" in body:
        _require(body, "log", str)
    _no_unknown(body, {"student_id", "lesson_id", "stage_index", "score", "phase", "log"})


def _validate_latency_sample(body: Dict) -> None:
    _require(body, "gesture_seq", int)
    _require(body, "stage_index", int)
    t_cap = _require(body, "t_capture", float)
    t_rec = _require(body, "t_received", float)
    t_eval = _require(body, "t_evaluated", float)
    t_cast = _require(body, "t_broadcast", float)
    if not (t_rec <= t_eval <= t_cast):
        raise ValidationError(
            "t_evaluated", "timestamps must satisfy t_received <= t_evaluated <= t_broadcast"
        )
    _no_unknown(
        body,
        {"gesture_seq", "stage_index", "t_capture", "t_received", "t_evaluated", "t_broadcast"},
    )


_VALIDATORS = {
    "students": _validate_person,
    "teachers": _validate_person,
    "lessons": _validate_lesson,
    "questions": _validate_question,
    "gesture_bindings": _validate_binding,
    "hologram_options": _validate_hologram,
    "sessions": _validate_session,
    "latency_samples": _validate_latency_sample,
}

_FILTERABLE = {
    "students": {"name"},
    "teachers": {"name"},
    "lessons": {"title"},
    "questions": {"lesson_id", "stage_index", "correct", "position"},
    "gesture_bindings": {"name"},
    "hologram_options": {"name"},
    "sessions": {"student_id", "lesson_id", "stage_index", "score", "phase"},
    "latency_samples": {"gesture_seq", "stage_index"},
}

_FIELD_TYPES = {
    "stage_index": int,
    "score": int,
    "position": int,
    "gesture_seq": int,
    "correct": bool,
}


def validate_body(collection: str, body: Dict) -> None:
    _VALIDATORS[collection](body)


def filterable_fields(collection: str) -> set:
    return _FILTERABLE[collection]


def coerce_filter_value(field: str, raw: str):
    """Turn a query-string value into the field's native type."""
    kind = _FIELD_TYPES.get(field, str)
    if kind is bool:
        if raw in ("true", "True", "1"):
            return True
        if raw in ("false", "False", "0"):
            return False
        raise ValidationError(field, "must be true or false")
    if kind is int:
        try:
            return int(raw)
        except ValueError:
            raise ValidationError(field, "must be an integer") from None
    return raw
