"""HTTP + WebSocket surface.

Endpoints:
  POST /api/gestures                 gesture submission (X-Session-Id header)
  GET  /api/poll?since=&role=&wait=  long-poll fallback for the stream
  GET  /api/latency                  latency report
  POST /api/sessions/start           start a lesson session
  GET  /api/lessons/{id}/validate    lesson integrity report
  *    /api/<collection>[/<id>]      document CRUD pass-through
  GET  /ws                           WebSocket stream (first frame: Hello)
  GET  /assets/*                     spritesheet pack files
  GET  /                             console (static) or a placeholder page
"""

from __future__ import annotations

import asyncio
from dataclasses import dataclass, field
from typing import Callable, Optional

from fastapi import FastAPI, Request, WebSocket, WebSocketDisconnect
from fastapi.responses import HTMLResponse, JSONResponse
from fastapi.staticfiles import StaticFiles

from holomed import session_core
from holomed.content_store import DocumentStore
from holomed.content_store.schemas import coerce_filter_value
from holomed.content_store.store import COLLECTIONS
from holomed.depth_gesture.types import GestureKind
from holomed.errors import (
    ConflictError,
    DecodeError,
    NotFoundError,
    ValidationError,
)
from holomed.projection.schedule import PyramidGeometry
from holomed.projection.sheets import Pack
from holomed.server.config import ServerConfig
from holomed.server.sessions import SessionManager
from holomed.wire_protocol.hub import BroadcastHub
from holomed.wire_protocol.latency import LatencyLog, LatencySample
from holomed.wire_protocol.messages import ROLES, Envelope, decode, encode


@dataclass
class ServerContext:
    config: ServerConfig
    store: DocumentStore
    hub: BroadcastHub
    sessions: SessionManager
    latency: LatencyLog
    pack: Pack
    geometry: PyramidGeometry
    now_ms: Callable[[], float]
    gesture_seq: int = 0
    persist_latency: bool = True

    def next_gesture_seq(self) -> int:
        self.gesture_seq += 1
        return self.gesture_seq


def _error(status: int, message: str, fld: Optional[str] = None) -> JSONResponse:
    body = {"error": message}
    if fld:
        body["field"] = fld
    return JSONResponse(body, status_code=status)


def _doc_json(doc) -> dict:
    return {"id": doc.id, "revision": doc.revision, "body": doc.body}


PLACEHOLDER_PAGE = """<!doctype html>
<html><head><title>holomed</title></head>
<body><h1>holomed server</h1>
<p>No console build found. The API lives under <code>/api</code>, the
stream under <code>/ws</code>.</p></body></html>
"""


def create_app(ctx: ServerContext) -> FastAPI:
    app = FastAPI(title="holomed", docs_url=None, redoc_url=None)

    # -- session lifecycle -------------------------------------------------

    @app.post("/api/sessions/start")
    async def start_session(request: Request):
        body = await _json_body(request)
        if body is None or not isinstance(body, dict):
            return _error(400, "body must be a JSON object")
        student_id = body.get("student_id")
        lesson_id = body.get("lesson_id")
        if not isinstance(student_id, str) or not student_id:
            return _error(400, "student_id is required", "student_id")
        if not isinstance(lesson_id, str) or not lesson_id:
            return _error(400, "lesson_id is required", "lesson_id")
        try:
            live, prompt = ctx.sessions.start(student_id, lesson_id)
        except NotFoundError as e:
            return _error(404, str(e))
        except ValidationError as e:
            return _error(400, e.message, e.field)
        _speak(ctx, prompt.speak_text, live.state.session_id)
        return {
            "session_id": live.state.session_id,
            "stage_index": live.state.stage_index,
            "phase": live.state.phase.value,
            "score": live.state.score,
            "prompt": prompt.speak_text,
        }

    # -- gesture submission ---------------------------------------------------

    @app.post("/api/gestures")
    async def submit_gesture(request: Request):
        t_received = ctx.now_ms()
        session_id = request.headers.get("X-Session-Id", "")
        if not session_id:
            return _error(400, "X-Session-Id header is required", "X-Session-Id")
        try:
            live = ctx.sessions.get(session_id)
        except NotFoundError as e:
            return _error(404, str(e))
        body = await _json_body(request)
        if body is None or not isinstance(body, dict):
            return _error(400, "body must be a JSON object")
        capture_ok = body.get("capture_ok")
        if not isinstance(capture_ok, bool):
            return _error(400, "capture_ok must be a boolean", "capture_ok")
        kind: Optional[GestureKind] = None
        if capture_ok:
            try:
                kind = GestureKind(body.get("kind"))
            except ValueError:
                return _error(400, f"unknown gesture kind {body.get('kind')!r}", "kind")
            if kind is GestureKind.NONE:
                return _error(400, "kind must be an actionable gesture", "kind")

        async with live.lock:
            state = live.state
            if capture_ok:
                evaluation = session_core.submit_gesture(
                    state, kind, live.binding, live.view, at_ms=int(t_received)
                )
            else:
                evaluation = session_core.record_capture_failure(
                    state, at_ms=int(t_received)
                )
            t_evaluated = ctx.now_ms()
            if evaluation is None:
                payload = {
                    "outcome": session_core.Outcome.CAPTURE_RETRY.value,
                    "speak_text": "I did not catch that. Please try again.",
                    "stage_index": state.stage_index,
                }
            else:
                payload = evaluation.as_payload()
            payload["session_id"] = session_id
            ctx.hub.broadcast(
                "AnswerEvaluated", payload, roles={"Projection", "Console"}
            )
            t_broadcast = ctx.now_ms()
            if payload["speak_text"]:
                _speak(ctx, payload["speak_text"], session_id)
            # open the next question right away so answers stay submittable
            if state.phase is session_core.Phase.PRESENTING:
                prompt = session_core.next_prompt(
                    state, live.view, at_ms=int(ctx.now_ms())
                )
                _speak(ctx, prompt.speak_text, session_id)
            sample = LatencySample(
                gesture_seq=ctx.next_gesture_seq(),
                stage_index=state.stage_index,
                t_capture=float(body.get("t_capture", 0.0) or 0.0),
                t_received=t_received,
                t_evaluated=t_evaluated,
                t_broadcast=t_broadcast,
            )
            ctx.latency.add(sample)
            if ctx.persist_latency:
                ctx.store.put("latency_samples", sample.as_body())
            ctx.sessions.persist(live)
        return JSONResponse(payload)

    # -- stream fallback and reports -----------------------------------------

    @app.get("/api/poll")
    async def poll(since: int = 0, role: str = "Console", wait: float = 10.0):
        if role not in ROLES:
            return _error(400, f"unknown role {role!r}", "role")
        return await ctx.hub.poll(since, role, wait_s=min(wait, 25.0))

    @app.get("/api/latency")
    async def latency_report():
        return ctx.latency.report()

    @app.get("/api/lessons/{lesson_id}/validate")
    async def validate_lesson(lesson_id: str):
        try:
            violations = ctx.store.validate_lesson(lesson_id)
        except NotFoundError as e:
            return _error(404, str(e))
        return {"lesson_id": lesson_id, "violations": violations}

    # -- document CRUD ---------------------------------------------------------

    @app.get("/api/{collection}")
    async def list_documents(collection: str, request: Request):
        if collection not in COLLECTIONS:
            return _error(400, f"unknown collection {collection!r}", "collection")
        filters = {}
        try:
            for key, value in request.query_params.items():
                filters[key] = coerce_filter_value(key, value)
            docs = ctx.store.list(collection, filters or None)
        except ValidationError as e:
            return _error(400, e.message, e.field)
        return {"documents": [_doc_json(d) for d in docs]}

    @app.post("/api/{collection}")
    async def insert_document(collection: str, request: Request):
        if collection not in COLLECTIONS:
            return _error(400, f"unknown collection {collection!r}", "collection")
        body = await _json_body(request)
        if body is None or not isinstance(body, dict):
            return _error(400, "body must be a JSON object")
        try:
            doc = ctx.store.put(collection, body)
        except ValidationError as e:
            return _error(400, e.message, e.field)
        return _doc_json(doc)

    @app.get("/api/{collection}/{doc_id}")
    async def get_document(collection: str, doc_id: str):
        if collection not in COLLECTIONS:
            return _error(400, f"unknown collection {collection!r}", "collection")
        try:
            return _doc_json(ctx.store.get(collection, doc_id))
        except NotFoundError as e:
            return _error(404, str(e))

    @app.put("/api/{collection}/{doc_id}")
    async def put_document(collection: str, doc_id: str, request: Request):
        if collection not in COLLECTIONS:
            return _error(400, f"unknown collection {collection!r}", "collection")
        body = await _json_body(request)
        if body is None or not isinstance(body, dict):
            return _error(400, "body must be a JSON object")
        expected = request.headers.get("X-Expected-Revision")
        expected_revision = None
        if expected is not None:
            try:
                expected_revision = int(expected)
            except ValueError:
                return _error(400, "X-Expected-Revision must be an integer")
        try:
            doc = ctx.store.put(
                collection, body, doc_id=doc_id, expected_revision=expected_revision
            )
        except ValidationError as e:
            return _error(400, e.message, e.field)
        except ConflictError as e:
            return _error(409, str(e))
        return _doc_json(doc)

    @app.delete("/api/{collection}/{doc_id}")
    async def delete_document(collection: str, doc_id: str):
        if collection not in COLLECTIONS:
            return _error(400, f"unknown collection {collection!r}", "collection")
        return {"deleted": ctx.store.delete(collection, doc_id)}

    # -- streaming ---------------------------------------------------------------

    @app.websocket("/ws")
    async def stream(websocket: WebSocket):
        await websocket.accept()
        try:
            raw = await websocket.receive_text()
            hello = decode(raw)
        except DecodeError as e:
            await _ws_error(websocket, "bad-hello", str(e))
            return
        except WebSocketDisconnect:
            return
        if hello.type != "Hello" or hello.payload.get("role") not in ROLES:
            await _ws_error(websocket, "bad-hello", "first frame must be Hello{role}")
            return
        handle = ctx.hub.register(
            hello.payload["role"], hello.payload.get("session_id", "")
        )

        async def writer():
            while True:
                envelope = await handle.queue.get()
                await websocket.send_text(encode(envelope).decode("utf-8"))

        writer_task = asyncio.ensure_future(writer())

        def kicked():
            writer_task.cancel()
            asyncio.ensure_future(websocket.close(code=1013))

        handle.on_kick = kicked
        try:
            while True:
                raw = await websocket.receive_text()
                try:
                    envelope = decode(raw)
                except DecodeError as e:
                    _enqueue(ctx, handle, "ErrorNotice", {"code": "decode", "text": str(e)})
                    continue
                if envelope.type == "Ping":
                    _enqueue(
                        ctx,
                        handle,
                        "Pong",
                        {
                            "nonce": envelope.payload["nonce"],
                            "echo_ms": ctx.now_ms(),
                        },
                    )
                else:
                    _enqueue(
                        ctx,
                        handle,
                        "ErrorNotice",
                        {
                            "code": "unsupported",
                            "text": f"{envelope.type} is not accepted on this stream",
                        },
                    )
        except WebSocketDisconnect:
            pass
        finally:
            ctx.hub.unregister(handle)
            writer_task.cancel()

    # -- static assets ------------------------------------------------------------

    app.mount("/assets", StaticFiles(directory=ctx.pack.root), name="assets")
    if ctx.config.static_dir is not None:
        app.mount(
            "/", StaticFiles(directory=ctx.config.static_dir, html=True), name="console"
        )
    else:

        @app.get("/")
        async def placeholder():
            return HTMLResponse(PLACEHOLDER_PAGE)

    return app


def _speak(ctx: ServerContext, text: str, session_id: str) -> None:
    if text:
        ctx.hub.broadcast(
            "SpeakText",
            {"text": text, "session_id": session_id},
            roles={"Projection", "Console"},
        )


def _enqueue(ctx: ServerContext, handle, msg_type: str, payload: dict) -> None:
    try:
        handle.queue.put_nowait(
            Envelope(msg_type, handle.next_seq(), ctx.now_ms(), payload)
        )
    except asyncio.QueueFull:
        ctx.hub.kick(handle, "slow-consumer")


async def _ws_error(websocket: WebSocket, code: str, text: str) -> None:
    try:
        envelope = Envelope("ErrorNotice", 1, 0.0, {"code": code, "text": text})
        await websocket.send_text(encode(envelope).decode("utf-8"))
        await websocket.close()
    except Exception:
        pass


async def _json_body(request: Request):
    try:
        return await request.json()
    except Exception:
        return None
