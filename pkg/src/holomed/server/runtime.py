"""Server lifecycle: store -> assets -> listener -> tick loop.

The readiness line is printed only after all four stages are up; any stage
failing rolls back the ones already started and exits nonzero. Shutdown
notifies connected clients, stops the ticker, closes the listener and
flushes the store journal.
"""

from __future__ import annotations

import asyncio
import signal
import sys
import time
from typing import Optional

import uvicorn

from holomed.content_store import DocumentStore
from holomed.defaults import (
    DEFAULT_LESSON_ID,
    default_binding_body,
    default_hologram_body,
    default_lesson_body,
    default_question_bodies,
)
from holomed.errors import ConfigError, HolomedError, PackError
from holomed.projection.schedule import build_schedule
from holomed.projection.sheets import load_pack
from holomed.projection.ticker import MonotonicClock, tick_loop
from holomed.server.app import ServerContext, create_app
from holomed.server.config import ServerConfig
from holomed.server.sessions import SessionManager
from holomed.session_core import stage_for_projection
from holomed.wire_protocol.hub import BroadcastHub
from holomed.wire_protocol.latency import LatencyLog

EXIT_STARTUP_FAILURE = 2


class StartupError(HolomedError):
    def __init__(self, stage: str, message: str):
        super().__init__(f"startup failed at {stage}: {message}")
        self.stage = stage


def now_ms() -> float:
    return time.monotonic() * 1000.0


def seed_defaults(store: DocumentStore) -> None:
    """First-run content so a fresh server is usable immediately."""
    if not store.list("lessons"):
        store.put("lessons", default_lesson_body(), doc_id=DEFAULT_LESSON_ID)
        for q in default_question_bodies(DEFAULT_LESSON_ID):
            store.put("questions", q)
    if not store.list("gesture_bindings"):
        store.put("gesture_bindings", default_binding_body())
    if not store.list("hologram_options"):
        store.put("hologram_options", default_hologram_body())
    if not store.list("students"):
        store.put("students", {"name": "demo-student"})


class Server:
    def __init__(self, config: ServerConfig, quiet: bool = False):
        self.config = config
        self.quiet = quiet
        self.bound_port: Optional[int] = None
        self.ctx: Optional[ServerContext] = None
        self.ready = asyncio.Event()
        self._shutdown = asyncio.Event()
        self._uvicorn: Optional[uvicorn.Server] = None

    def request_shutdown(self) -> None:
        self._shutdown.set()

    def _say(self, line: str) -> None:
        if not self.quiet:
            print(line, flush=True)

    async def serve(self) -> None:
        try:
            self.config.validate()
        except ConfigError as e:
            raise StartupError("config", str(e)) from None

        # stage 1: store
        store = DocumentStore(self.config.store_dir)
        try:
            # stage 2: assets (281-frame check happens inside load_pack)
            try:
                pack = load_pack(self.config.pack_dir)
            except PackError as e:
                raise StartupError("assets", str(e)) from None
            if self.config.seed_defaults:
                seed_defaults(store)

            hub = BroadcastHub(now_ms=now_ms)
            sessions = SessionManager(store, now_ms)
            ctx = ServerContext(
                config=self.config,
                store=store,
                hub=hub,
                sessions=sessions,
                latency=LatencyLog(),
                pack=pack,
                geometry=self.config.geometry(),
                now_ms=now_ms,
            )
            self.ctx = ctx
            app = create_app(ctx)

            # stage 3: listener
            uv_config = uvicorn.Config(
                app,
                host=self.config.host,
                port=self.config.port,
                log_level="warning",
                ws="auto",
                lifespan="off",
            )
            self._uvicorn = uvicorn.Server(uv_config)
            listener = asyncio.ensure_future(self._uvicorn.serve())
            while not self._uvicorn.started:
                if listener.done():
                    exc = listener.exception()
                    raise StartupError("listener", str(exc) if exc else "exited early")
                await asyncio.sleep(0.01)
            self.bound_port = self._uvicorn.servers[0].sockets[0].getsockname()[1]

            # stage 4: tick loop
            stop_ticks = asyncio.Event()
            ticker = asyncio.ensure_future(
                tick_loop(MonotonicClock(), self.config.fps, self._make_emit(ctx), stop_ticks)
            )
            await asyncio.sleep(0)  # let the first tick go out

            self._say(
                f"holomed ready on http://{self.config.host}:{self.bound_port} "
                f"(fps {self.config.fps}, {len(pack.sheets)} sheets / "
                f"{pack.total_frames} frames, store {self.config.store_dir})"
            )
            self.ready.set()

            await self._shutdown.wait()

            # graceful shutdown
            hub.broadcast("ErrorNotice", {"code": "shutdown", "text": "server stopping"})
            await asyncio.sleep(0.05)  # drain writers
            stop_ticks.set()
            await ticker
            self._uvicorn.should_exit = True
            await listener
        finally:
            store.close()

    def _make_emit(self, ctx: ServerContext):
        config = self.config

        async def emit(tick: int) -> None:
            live_sessions = ctx.sessions.all_live()
            roles = {"Projection", "Console"}
            if live_sessions:
                for live in live_sessions:
                    sheet_id = stage_for_projection(live.state)
                    schedule = build_schedule(
                        ctx.pack.sheets[sheet_id],
                        tick,
                        config.fps,
                        config.rotation_period_ms,
                        ctx.geometry,
                        session_id=live.state.session_id,
                    )
                    ctx.hub.broadcast("ScheduleUpdate", schedule.as_payload(), roles=roles)
            else:
                schedule = build_schedule(
                    ctx.pack.sheets[1],
                    tick,
                    config.fps,
                    config.rotation_period_ms,
                    ctx.geometry,
                )
                ctx.hub.broadcast("ScheduleUpdate", schedule.as_payload(), roles=roles)

        return emit


def run(config: ServerConfig) -> int:
    """Blocking entry point: serve until interrupted."""

    async def main() -> int:
        server = Server(config)
        loop = asyncio.get_running_loop()
        for sig in (signal.SIGINT, signal.SIGTERM):
            try:
                loop.add_signal_handler(sig, server.request_shutdown)
            except NotImplementedError:  # pragma: no cover
                pass
        try:
            await server.serve()
        except StartupError as e:
            print(f"holomed: {e}", file=sys.stderr)
            return EXIT_STARTUP_FAILURE
        return 0

    try:
        return asyncio.run(main())
    except KeyboardInterrupt:  # pragma: no cover
        return 0
