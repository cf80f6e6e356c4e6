"""Live session registry: per-session serialization and persistence."""

from __future__ import annotations

import asyncio
from dataclasses import dataclass, field
from typing import Callable, Dict, List

from holomed.content_store import DocumentStore
from holomed.content_store.store import new_id
from holomed.errors import NotFoundError, ValidationError
from holomed.session_core import (
    Evaluation,
    GestureBinding,
    LessonView,
    Phase,
    SessionState,
    next_prompt,
    start_session,
)


@dataclass
class LiveSession:
    state: SessionState
    view: LessonView
    binding: GestureBinding
    lock: asyncio.Lock = field(default_factory=asyncio.Lock)


class SessionManager:
    def __init__(self, store: DocumentStore, now_ms: Callable[[], float]):
        self.store = store
        self.now_ms = now_ms
        self._live: Dict[str, LiveSession] = {}

    def _load_binding(self) -> GestureBinding:
        docs = self.store.list("gesture_bindings", {"name": "default"})
        if not docs:
            docs = self.store.list("gesture_bindings")
        if docs:
            return GestureBinding.from_body(docs[0].body["map"])
        return GestureBinding.default()

    def start(self, student_id: str, lesson_id: str) -> tuple:
        """Start a session and open its first question. Returns the live
        session and the first prompt evaluation."""
        self.store.get("students", student_id)  # NotFoundError on unknown
        view = self.store.lesson_view(lesson_id)
        session_id = new_id()
        at = int(self.now_ms())
        state = start_session(student_id, lesson_id, view, session_id, at_ms=at)
        live = LiveSession(state, view, self._load_binding())
        prompt = next_prompt(state, view, at_ms=at)
        self._live[session_id] = live
        self.persist(live)
        return live, prompt

    def get(self, session_id: str) -> LiveSession:
        live = self._live.get(session_id)
        if live is None:
            raise NotFoundError(f"session {session_id} not found")
        return live

    def persist(self, live: LiveSession) -> None:
        state = live.state
        self.store.put(
            "sessions",
            {
                "student_id": state.student_id,
                "lesson_id": state.lesson_id,
                "stage_index": state.stage_index,
                "score": state.score,
                "phase": state.phase.value,
                "log": state.export_log(),
            },
            doc_id=state.session_id,
        )

    def active(self) -> List[LiveSession]:
        return [s for s in self._live.values() if s.state.phase is not Phase.FINISHED]

    def all_live(self) -> List[LiveSession]:
        return list(self._live.values())
