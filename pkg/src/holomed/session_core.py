"""One student's lesson session: the 8-stage delivery sequence, true/false
questions, gesture-bound actions and the 3-attempt capture rule.

All operations are deterministic given their inputs (the caller supplies
timestamps), so replaying a recorded event sequence reproduces the final
state and the log byte for byte.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Mapping, Optional

from holomed.depth_gesture.types import GestureKind
from holomed.errors import NotFoundError, ValidationError

STAGE_COUNT = 8
FINAL_SHEET_ID = 8
MAX_CAPTURE_FAILURES = 3


class Meaning(str, Enum):
    ANSWER_YES = "AnswerYes"
    ANSWER_NO = "AnswerNo"
    NEXT_LESSON = "NextLesson"
    HINT = "Hint"
    LOG_OFF = "LogOff"


class Phase(str, Enum):
    AWAITING_START = "AwaitingStart"
    PRESENTING = "Presenting"
    AWAITING_ANSWER = "AwaitingAnswer"
    FINISHED = "Finished"


class Outcome(str, Enum):
    CORRECT = "Correct"
    INCORRECT = "Incorrect"
    HINT_SHOWN = "HintShown"
    ADVANCED = "Advanced"
    LESSON_SWITCHED = "LessonSwitched"
    LOGGED_OFF = "LoggedOff"
    CAPTURE_ERROR = "CaptureError"
    # auxiliary results for the wire: not lesson events, just request outcomes
    CAPTURE_RETRY = "CaptureRetry"
    REJECTED = "Rejected"
    NO_OP = "NoOp"


@dataclass(frozen=True)
class Stage:
    index: int
    name: str
    description: str
    sheet_id: int


@dataclass(frozen=True)
class Question:
    id: str
    stage_index: int
    prompt: str
    correct: bool
    hint: str = ""
    position: int = 0  # authored order within the stage


class GestureBinding:
    """Injective map from gesture kinds to lesson meanings; yes and no must
    both be bound."""

    def __init__(self, mapping: Mapping[GestureKind, Meaning]):
        seen: Dict[Meaning, GestureKind] = {}
        for kind, meaning in mapping.items():
            if kind is GestureKind.NONE:
                raise ValidationError(f"map.{kind.value}", "cannot bind the null gesture")
            if meaning in seen:
                raise ValidationError(
                    f"map.{kind.value}",
                    f"meaning {meaning.value} already bound to {seen[meaning].value}",
                )
            seen[meaning] = kind
        for required in (Meaning.ANSWER_YES, Meaning.ANSWER_NO):
            if required not in seen:
                raise ValidationError("map", f"{required.value} must be bound")
        self._mapping = dict(mapping)

    def meaning_of(self, kind: GestureKind) -> Optional[Meaning]:
        return self._mapping.get(kind)

    def as_body(self) -> Dict[str, str]:
        return {k.value: v.value for k, v in self._mapping.items()}

    @classmethod
    def from_body(cls, body: Mapping[str, str]) -> "GestureBinding":
        mapping = {}
        for kind_s, meaning_s in body.items():
            try:
                kind = GestureKind(kind_s)
            except ValueError:
                raise ValidationError(f"map.{kind_s}", "unknown gesture kind") from None
            try:
                meaning = Meaning(meaning_s)
            except ValueError:
                raise ValidationError(f"map.{kind_s}", "unknown meaning") from None
            mapping[kind] = meaning
        return cls(mapping)

    @classmethod
    def default(cls) -> "GestureBinding":
        return cls(
            {
                GestureKind.SWIPE_RIGHT: Meaning.ANSWER_YES,
                GestureKind.SWIPE_LEFT: Meaning.ANSWER_NO,
                GestureKind.RAISE_BOTH: Meaning.HINT,
                GestureKind.HOLD_STILL: Meaning.NEXT_LESSON,
            }
        )


@dataclass
class LessonView:
    """Read-only lesson snapshot a session runs against."""

    lesson_id: str
    stages: List[Stage]
    questions: Dict[int, List[Question]]  # stage index -> authored order

    def stage(self, index: int) -> Stage:
        for s in self.stages:
            if s.index == index:
                return s
        raise NotFoundError(f"stage {index} not in lesson {self.lesson_id}")

    def questions_for(self, index: int) -> List[Question]:
        return self.questions.get(index, [])

    def question(self, question_id: str) -> Question:
        for qs in self.questions.values():
            for q in qs:
                if q.id == question_id:
                    return q
        raise NotFoundError(f"question {question_id} not in lesson {self.lesson_id}")


def validate_lesson_view(view: LessonView) -> List[str]:
    """Integrity report; an empty list means a session may start."""
    violations: List[str] = []
    seen = {}
    for s in view.stages:
        if not (1 <= s.index <= STAGE_COUNT):
            violations.append(f"stage index {s.index} out of range 1..{STAGE_COUNT}")
            continue
        if s.index in seen:
            violations.append(f"duplicate stage index {s.index}")
        seen[s.index] = s
    for i in range(1, STAGE_COUNT + 1):
        if i not in seen:
            violations.append(f"missing stage index {i}")
    for i in sorted(seen):
        if not view.questions_for(i):
            violations.append(f"stage {i} has no questions")
    for idx, qs in sorted(view.questions.items()):
        if idx not in seen:
            for q in qs:
                violations.append(f"question {q.id} references missing stage {idx}")
    if not any(s.sheet_id == FINAL_SHEET_ID for s in seen.values()):
        violations.append(f"no stage references the final sheet ({FINAL_SHEET_ID})")
    return violations


@dataclass
class LogRecord:
    at_ms: int
    event: str
    detail: str


@dataclass
class Evaluation:
    outcome: Outcome
    speak_text: str
    next_stage: int

    def as_payload(self) -> Dict:
        return {
            "outcome": self.outcome.value,
            "speak_text": self.speak_text,
            "stage_index": self.next_stage,
        }


@dataclass
class SessionState:
    session_id: str
    student_id: str
    lesson_id: str
    stage_index: int = 1
    current_question: Optional[str] = None
    capture_failures: int = 0
    score: int = 0
    phase: Phase = Phase.AWAITING_START
    log: List[LogRecord] = field(default_factory=list)
    stage_sheets: Dict[int, int] = field(default_factory=dict)

    def record(self, at_ms: int, event: str, detail: str = "") -> None:
        self.log.append(LogRecord(at_ms, event, detail))

    def export_log(self) -> str:
        lines = [
            f"{r.at_ms} {self.session_id} {r.event} {r.detail}".rstrip()
            for r in self.log
        ]
        return "\n".join(lines) + "\n"


def start_session(
    student_id: str,
    lesson_id: str,
    view: LessonView,
    session_id: str,
    at_ms: int = 0,
) -> SessionState:
    violations = validate_lesson_view(view)
    if violations:
        raise ValidationError("lesson", "; ".join(violations))
    first = view.questions_for(1)[0]
    state = SessionState(
        session_id=session_id,
        student_id=student_id,
        lesson_id=lesson_id,
        stage_index=1,
        current_question=first.id,
        phase=Phase.PRESENTING,
        stage_sheets={s.index: s.sheet_id for s in view.stages},
    )
    state.record(at_ms, "start", f"lesson={lesson_id} student={student_id}")
    return state


def next_prompt(state: SessionState, view: LessonView, at_ms: int = 0) -> Evaluation:
    """Speak the pending stage/question prompt and open it for answers."""
    if state.phase is not Phase.PRESENTING:
        return _rejected(state, at_ms, "Nothing is waiting to be presented.")
    question = view.question(state.current_question)
    qs = view.questions_for(state.stage_index)
    text = ""
    if qs and qs[0].id == question.id:
        stage = view.stage(state.stage_index)
        text = f"Stage {stage.index}, {stage.name}. {stage.description} "
    text += f"Question: {question.prompt}"
    state.phase = Phase.AWAITING_ANSWER
    state.record(at_ms, "prompt", f"question={question.id}")
    return Evaluation(Outcome.ADVANCED, text, state.stage_index)


def submit_gesture(
    state: SessionState,
    kind: GestureKind,
    binding: GestureBinding,
    view: LessonView,
    at_ms: int = 0,
) -> Evaluation:
    if state.phase is Phase.FINISHED:
        return _rejected(state, at_ms, "The session is already finished.")
    # the gesture was captured fine, whatever it means
    state.capture_failures = 0
    meaning = binding.meaning_of(kind)
    if meaning is None:
        state.record(at_ms, "noop", f"kind={kind.value}")
        return Evaluation(
            Outcome.NO_OP,
            "That gesture is not bound to any action.",
            state.stage_index,
        )

    if meaning is Meaning.HINT:
        question = view.question(state.current_question) if state.current_question else None
        hint = question.hint if question and question.hint else "No hint is available."
        state.record(at_ms, "hint", f"question={question.id if question else '-'}")
        return Evaluation(Outcome.HINT_SHOWN, hint, state.stage_index)

    if meaning is Meaning.LOG_OFF:
        state.phase = Phase.FINISHED
        state.current_question = None
        state.record(at_ms, "logoff", f"score={state.score}")
        return Evaluation(Outcome.LOGGED_OFF, "Logging off. Goodbye.", state.stage_index)

    if meaning is Meaning.NEXT_LESSON:
        state.record(at_ms, "next_lesson", "")
        return Evaluation(
            Outcome.LESSON_SWITCHED,
            "Switching to the next lesson.",
            state.stage_index,
        )

    # answers
    if state.phase is not Phase.AWAITING_ANSWER:
        return _rejected(
            state, at_ms, "No question is open for answers right now."
        )
    question = view.question(state.current_question)
    answered_yes = meaning is Meaning.ANSWER_YES
    if answered_yes != question.correct:
        state.record(at_ms, "incorrect", f"question={question.id}")
        return Evaluation(
            Outcome.INCORRECT,
            "That is not correct. Try again.",
            state.stage_index,
        )

    state.score += 1
    state.record(at_ms, "correct", f"question={question.id} score={state.score}")
    qs = view.questions_for(state.stage_index)
    pos = next(i for i, q in enumerate(qs) if q.id == question.id)
    if pos + 1 < len(qs):
        state.current_question = qs[pos + 1].id
        state.phase = Phase.PRESENTING
        speak = "Correct!"
    elif state.stage_index < STAGE_COUNT:
        state.stage_index += 1
        state.current_question = view.questions_for(state.stage_index)[0].id
        state.phase = Phase.PRESENTING
        speak = f"Correct! Moving on to stage {state.stage_index}."
        state.record(at_ms, "stage", f"index={state.stage_index}")
    else:
        state.current_question = None
        state.phase = Phase.FINISHED
        speak = f"Correct! Lesson complete with a score of {state.score}."
        state.record(at_ms, "finished", f"score={state.score}")
    return Evaluation(Outcome.CORRECT, speak, state.stage_index)


def record_capture_failure(state: SessionState, at_ms: int = 0) -> Optional[Evaluation]:
    """Count a failed capture attempt; the third consecutive one emits a
    CaptureError and resets the counter."""
    if state.phase is Phase.FINISHED:
        return _rejected(state, at_ms, "The session is already finished.")
    state.capture_failures += 1
    state.record(at_ms, "capture_failure", f"count={state.capture_failures}")
    if state.capture_failures >= MAX_CAPTURE_FAILURES:
        state.capture_failures = 0
        state.record(at_ms, "capture_error", "")
        return Evaluation(
            Outcome.CAPTURE_ERROR,
            "I could not read your gesture three times in a row. "
            "Please stand at the marked distance and try again.",
            state.stage_index,
        )
    return None


def stage_for_projection(state: SessionState) -> int:
    """Sheet to project for this session's progress."""
    if state.phase is Phase.FINISHED:
        return FINAL_SHEET_ID
    return state.stage_sheets.get(state.stage_index, state.stage_index)


def _rejected(state: SessionState, at_ms: int, text: str) -> Evaluation:
    state.record(at_ms, "rejected", f"phase={state.phase.value}")
    return Evaluation(Outcome.REJECTED, text, state.stage_index)
