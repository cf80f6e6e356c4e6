"""Document store: per-collection append-only journal plus snapshot.

Layout: one directory per collection holding ``snapshot.json`` (written on
close) and ``journal.ndjson`` (one write per line, fsynced before the call
returns). Opening replays the snapshot then the journal, tolerating a torn
final line, so a killed process loses nothing that was acknowledged.

Serialization is canonical: UTF-8 JSON, keys sorted, no insignificant
whitespace. Writers are serialized per collection; readers copy under the
same lock and never block each other.
"""

from __future__ import annotations

import copy
import json
import os
import secrets
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional

from holomed.content_store import schemas
from holomed.errors import ConflictError, NotFoundError, ValidationError
from holomed.session_core import LessonView, Question, Stage, validate_lesson_view

COLLECTIONS = (
    "students",
    "teachers",
    "lessons",
    "questions",
    "gesture_bindings",
    "hologram_options",
    "sessions",
    "latency_samples",
)

SNAPSHOT = "snapshot.json"
JOURNAL = "journal.ndjson"


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def new_id() -> str:
    return secrets.token_hex(8)


@dataclass
class Document:
    id: str
    collection: str
    body: Dict
    revision: int


class DocumentStore:
    def __init__(self, root, fsync: bool = True):
        self.root = Path(root)
        self.fsync = fsync
        self._data: Dict[str, Dict[str, tuple]] = {}
        self._locks: Dict[str, threading.RLock] = {}
        self._journals: Dict[str, object] = {}
        self._closed = False
        for collection in COLLECTIONS:
            directory = self.root / collection
            directory.mkdir(parents=True, exist_ok=True)
            self._locks[collection] = threading.RLock()
            self._data[collection] = self._load(directory)
            self._journals[collection] = open(
                directory / JOURNAL, "a", encoding="utf-8"
            )

    @staticmethod
    def _load(directory: Path) -> Dict[str, tuple]:
        docs: Dict[str, tuple] = {}
        snapshot = directory / SNAPSHOT
        if snapshot.is_file():
            data = json.loads(snapshot.read_text(encoding="utf-8"))
            for doc_id, entry in data.get("documents", {}).items():
                docs[doc_id] = (entry["body"], entry["revision"])
        journal = directory / JOURNAL
        if journal.is_file():
            with open(journal, encoding="utf-8") as fh:
                for line in fh:
                    line = line.strip()
                    if not line:
                        continue
                    try:
                        record = json.loads(line)
                    except json.JSONDecodeError:
                        break  # torn tail from a crash; everything before is intact
                    if record["op"] == "put":
                        docs[record["id"]] = (record["body"], record["revision"])
                    elif record["op"] == "delete":
                        docs.pop(record["id"], None)
        return docs

    def _append(self, collection: str, record: Dict) -> None:
        fh = self._journals[collection]
        fh.write(canonical_json(record) + "\n")
        fh.flush()
        if self.fsync:
            os.fsync(fh.fileno())

    @staticmethod
    def _check_collection(collection: str) -> None:
        if collection not in COLLECTIONS:
            raise ValidationError("collection", f"unknown collection {collection!r}")

    # -- CRUD ------------------------------------------------------------

    def put(
        self,
        collection: str,
        body: Dict,
        doc_id: Optional[str] = None,
        expected_revision: Optional[int] = None,
    ) -> Document:
        self._check_collection(collection)
        schemas.validate_body(collection, body)
        with self._locks[collection]:
            docs = self._data[collection]
            if doc_id is None:
                doc_id = new_id()
                while doc_id in docs:
                    doc_id = new_id()
            current = docs.get(doc_id)
            current_rev = current[1] if current else 0
            if expected_revision is not None and expected_revision != current_rev:
                raise ConflictError(
                    f"{collection}/{doc_id}: expected revision "
                    f"{expected_revision}, found {current_rev}"
                )
            revision = current_rev + 1
            stored = copy.deepcopy(body)
            self._append(
                collection,
                {"op": "put", "id": doc_id, "revision": revision, "body": stored},
            )
            docs[doc_id] = (stored, revision)
            return Document(doc_id, collection, copy.deepcopy(stored), revision)

    def get(self, collection: str, doc_id: str) -> Document:
        self._check_collection(collection)
        with self._locks[collection]:
            entry = self._data[collection].get(doc_id)
            if entry is None:
                raise NotFoundError(f"{collection}/{doc_id} not found")
            body, revision = entry
            return Document(doc_id, collection, copy.deepcopy(body), revision)

    def list(self, collection: str, filter: Optional[Dict] = None) -> List[Document]:
        self._check_collection(collection)
        if filter:
            allowed = schemas.filterable_fields(collection)
            for key in filter:
                if key not in allowed:
                    raise ValidationError(key, "unknown filter field")
        with self._locks[collection]:
            out = []
            for doc_id in sorted(self._data[collection]):
                body, revision = self._data[collection][doc_id]
                if filter and any(body.get(k) != v for k, v in filter.items()):
                    continue
                out.append(Document(doc_id, collection, copy.deepcopy(body), revision))
            return out

    def delete(self, collection: str, doc_id: str) -> bool:
        self._check_collection(collection)
        with self._locks[collection]:
            if doc_id in self._data[collection]:
                self._append(collection, {"op": "delete", "id": doc_id})
                del self._data[collection][doc_id]
                return True
            return False

    # -- lifecycle ---------------------------------------------------------

    def close(self) -> None:
        """Compact each journal into its snapshot and truncate it."""
        if self._closed:
            return
        for collection in COLLECTIONS:
            with self._locks[collection]:
                directory = self.root / collection
                docs = {
                    doc_id: {"body": body, "revision": revision}
                    for doc_id, (body, revision) in self._data[collection].items()
                }
                tmp = directory / (SNAPSHOT + ".tmp")
                payload = canonical_json({"documents": docs})
                with open(tmp, "w", encoding="utf-8") as fh:
                    fh.write(payload)
                    fh.flush()
                    if self.fsync:
                        os.fsync(fh.fileno())
                os.replace(tmp, directory / SNAPSHOT)
                self._journals[collection].close()
                open(directory / JOURNAL, "w", encoding="utf-8").close()
        self._closed = True

    # -- lesson helpers ----------------------------------------------------

    def lesson_view(self, lesson_id: str) -> LessonView:
        lesson = self.get("lessons", lesson_id)
        stages = [
            Stage(s["index"], s["name"], s["description"], s["sheet_id"])
            for s in lesson.body["stages"]
        ]
        questions: Dict[int, List[Question]] = {}
        docs = self.list("questions", {"lesson_id": lesson_id})
        docs.sort(key=lambda d: (d.body.get("position", 0), d.id))
        for doc in docs:
            q = Question(
                id=doc.id,
                stage_index=doc.body["stage_index"],
                prompt=doc.body["prompt"],
                correct=doc.body["correct"],
                hint=doc.body.get("hint", ""),
                position=doc.body.get("position", 0),
            )
            questions.setdefault(q.stage_index, []).append(q)
        return LessonView(lesson_id, stages, questions)

    def validate_lesson(self, lesson_id: str) -> List[str]:
        return validate_lesson_view(self.lesson_view(lesson_id))
