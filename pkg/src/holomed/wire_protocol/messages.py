"""Envelope schema and codec.

One UTF-8 JSON object per frame: {type, seq, sent_ms, payload}. Decoding
is tolerant of unknown payload fields (they are dropped) but strict about
the closed type set and each type's required fields, so decode(encode(e))
round-trips every well-formed envelope.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Dict

from holomed.errors import DecodeError

ROLES = ("GestureSource", "Projection", "Console")

_NUM = (int, float)

# type -> (required fields, optional fields)
MESSAGE_TYPES: Dict[str, tuple] = {
    "Hello": ({"role": str}, {"session_id": str}),
    "GestureDetected": (
        {"kind": str, "median_depth_mm": _NUM, "status": str, "capture_ok": bool},
        {},
    ),
    "AnswerEvaluated": (
        {"outcome": str, "speak_text": str, "stage_index": int},
        {"session_id": str},
    ),
    "ScheduleUpdate": (
        {
            "tick": int,
            "sheet_id": int,
            "frame_index": (int, str),
            "faces": list,
            "fps": int,
        },
        {"session_id": str},
    ),
    "SpeakText": ({"text": str}, {"session_id": str}),
    "ErrorNotice": ({"code": str, "text": str}, {}),
    "Ping": ({"nonce": (int, str)}, {}),
    "Pong": ({"nonce": (int, str), "echo_ms": _NUM}, {}),
}


@dataclass
class Envelope:
    type: str
    seq: int
    sent_ms: float
    payload: Dict


def encode(envelope: Envelope) -> bytes:
    return json.dumps(
        {
            "type": envelope.type,
            "seq": envelope.seq,
            "sent_ms": envelope.sent_ms,
            "payload": envelope.payload,
        },
        sort_keys=True,
        separators=(",", ":"),
        ensure_ascii=False,
    ).encode("utf-8")


def decode(data) -> Envelope:
    if isinstance(data, bytes):
        data = data.decode("utf-8", errors="replace")
    try:
        obj = json.loads(data)
    except json.JSONDecodeError as e:
        raise DecodeError(f"malformed frame: {e.msg}", offset=e.pos) from None
    if not isinstance(obj, dict):
        raise DecodeError("frame is not an object")
    msg_type = obj.get("type")
    if msg_type not in MESSAGE_TYPES:
        raise DecodeError(f"unknown message type {msg_type!r}")
    seq = obj.get("seq")
    if not isinstance(seq, int) or isinstance(seq, bool) or seq < 1:
        raise DecodeError("seq must be a positive integer")
    sent_ms = obj.get("sent_ms")
    if isinstance(sent_ms, bool) or not isinstance(sent_ms, _NUM):
        raise DecodeError("sent_ms must be a number")
    raw_payload = obj.get("payload")
    if not isinstance(raw_payload, dict):
        raise DecodeError("payload must be an object")

    required, optional = MESSAGE_TYPES[msg_type]
    payload = {}
    for name, kind in required.items():
        if name not in raw_payload:
            raise DecodeError(f"{msg_type}.{name} is required")
        value = raw_payload[name]
        if isinstance(value, bool) and kind is not bool:
            raise DecodeError(f"{msg_type}.{name} has the wrong type")
        if not isinstance(value, kind):
            raise DecodeError(f"{msg_type}.{name} has the wrong type")
        payload[name] = value
    for name, kind in optional.items():
        if name in raw_payload and isinstance(raw_payload[name], kind):
            payload[name] = raw_payload[name]
    # anything else in raw_payload is an unknown field: dropped
    return Envelope(msg_type, seq, sent_ms, payload)
