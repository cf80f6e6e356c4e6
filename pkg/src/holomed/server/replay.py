"""Replay gesture source: feed a recorded depth sequence through the
recognition pipeline and submit every classified gesture over HTTP."""

from __future__ import annotations

import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

import httpx

from holomed.defaults import (
    DEFAULT_LESSON_ID,
    default_lesson_body,
    default_question_bodies,
)
from holomed.depth_gesture.fixtures import read_dseq
from holomed.depth_gesture.pipeline import GesturePipeline
from holomed.depth_gesture.types import GateConfig


@dataclass
class ReplaySummary:
    frames: int = 0
    submissions: int = 0
    gestures: Counter = field(default_factory=Counter)
    statuses: Counter = field(default_factory=Counter)
    outcomes: Counter = field(default_factory=Counter)
    session_id: str = ""

    def lines(self) -> list:
        def fmt(counter):
            return ", ".join(f"{k}={v}" for k, v in sorted(counter.items())) or "-"

        return [
            f"frames processed: {self.frames}",
            f"gestures submitted: {self.submissions} ({fmt(self.gestures)})",
            f"distance status: {fmt(self.statuses)}",
            f"responses: {fmt(self.outcomes)}",
        ]


def ensure_session(
    client: httpx.Client, student_name: str = "replay-student"
) -> str:
    """Find or create the content a replay run needs, start a session."""
    lessons = client.get("/api/lessons").json()["documents"]
    if any(d["id"] == DEFAULT_LESSON_ID for d in lessons):
        lesson_id = DEFAULT_LESSON_ID
    elif lessons:
        lesson_id = lessons[0]["id"]
    else:
        client.put(f"/api/lessons/{DEFAULT_LESSON_ID}", json=default_lesson_body())
        for q in default_question_bodies(DEFAULT_LESSON_ID):
            client.post("/api/questions", json=q)
        lesson_id = DEFAULT_LESSON_ID

    students = client.get("/api/students", params={"name": student_name}).json()[
        "documents"
    ]
    if students:
        student_id = students[0]["id"]
    else:
        student_id = client.post(
            "/api/students", json={"name": student_name}
        ).json()["id"]

    response = client.post(
        "/api/sessions/start",
        json={"student_id": student_id, "lesson_id": lesson_id},
    )
    response.raise_for_status()
    return response.json()["session_id"]


def run_replay(
    fixture_path,
    server_url: str,
    speed: float = 1.0,
    session_id: Optional[str] = None,
    student_name: str = "replay-student",
    gate: GateConfig = GateConfig(),
    quiet: bool = False,
) -> ReplaySummary:
    frames = read_dseq(fixture_path)
    summary = ReplaySummary(frames=len(frames))
    pipeline = GesturePipeline(gate=gate)

    with httpx.Client(base_url=server_url, timeout=10.0) as client:
        if session_id is None:
            session_id = ensure_session(client, student_name)
        summary.session_id = session_id
        headers = {"X-Session-Id": session_id}
        prev_ts = None
        for frame in frames:
            if speed > 0 and prev_ts is not None and frame.timestamp > prev_ts:
                time.sleep((frame.timestamp - prev_ts) / 1000.0 / speed)
            prev_ts = frame.timestamp
            outcome = pipeline.process(frame)
            summary.statuses[outcome.status.value] += 1
            if outcome.event is None:
                continue
            event = outcome.event
            summary.gestures[event.kind.value] += 1
            summary.submissions += 1
            response = client.post(
                "/api/gestures",
                headers=headers,
                json={
                    "kind": event.kind.value,
                    "median_depth_mm": event.median_depth_mm,
                    "status": event.status.value,
                    "capture_ok": True,
                    "t_capture": event.timestamp,
                },
            )
            if response.status_code == 200:
                summary.outcomes[response.json()["outcome"]] += 1
            else:
                summary.outcomes[f"http-{response.status_code}"] += 1
            if not quiet:
                print(event.as_line())

    if not quiet:
        for line in summary.lines():
            print(line)
    return summary
