"""Run a real server (uvicorn + tick loop) in a background thread for tests."""

from __future__ import annotations

import asyncio
import json
import threading
from typing import Optional

import httpx
from websockets.sync.client import connect as ws_connect

from holomed.server.config import ServerConfig
from holomed.server.runtime import Server


class RunningServer:
    def __init__(self, config: ServerConfig):
        self.config = config
        self.server: Optional[Server] = None
        self.loop: Optional[asyncio.AbstractEventLoop] = None
        self.port: Optional[int] = None
        self.error: Optional[BaseException] = None
        self._ready = threading.Event()
        self._thread = threading.Thread(target=self._main, daemon=True)

    def _main(self):
        loop = asyncio.new_event_loop()
        asyncio.set_event_loop(loop)
        self.loop = loop

        async def run():
            self.server = Server(self.config, quiet=True)
            serve_task = asyncio.ensure_future(self.server.serve())
            ready_task = asyncio.ensure_future(self.server.ready.wait())
            done, _ = await asyncio.wait(
                {serve_task, ready_task}, return_when=asyncio.FIRST_COMPLETED
            )
            if serve_task in done:
                ready_task.cancel()
                exc = serve_task.exception()
                raise exc if exc else RuntimeError("server exited before ready")
            self.port = self.server.bound_port
            self._ready.set()
            await serve_task

        try:
            loop.run_until_complete(run())
        except BaseException as e:  # surfaced via .error in the test thread
            self.error = e
        finally:
            self._ready.set()
            loop.close()

    def __enter__(self) -> "RunningServer":
        self._thread.start()
        self._ready.wait(timeout=15)
        if self.error is not None:
            raise self.error
        if self.port is None:
            raise RuntimeError("server did not become ready")
        return self

    def __exit__(self, *exc):
        if self.server is not None and self.loop is not None:
            try:
                self.loop.call_soon_threadsafe(self.server.request_shutdown)
            except RuntimeError:
                pass  # loop already closed
        self._thread.join(timeout=15)

    @property
    def url(self) -> str:
        return f"http://127.0.0.1:{self.port}"

    @property
    def ws_url(self) -> str:
        return f"ws://127.0.0.1:{self.port}/ws"

    def client(self) -> httpx.Client:
        return httpx.Client(base_url=self.url, timeout=10.0)


class WsClient:
    """Synchronous streaming client for tests."""

    def __init__(self, running: RunningServer, role: str, session_id: str = ""):
        self.sock = ws_connect(running.ws_url, open_timeout=10)
        payload = {"role": role}
        if session_id:
            payload["session_id"] = session_id
        self.send("Hello", payload, seq=1)

    def send(self, msg_type: str, payload: dict, seq: int = 1):
        self.sock.send(
            json.dumps(
                {"type": msg_type, "seq": seq, "sent_ms": 0.0, "payload": payload}
            )
        )

    def recv(self, timeout: float = 10.0) -> dict:
        return json.loads(self.sock.recv(timeout=timeout))

    def recv_until(self, msg_type: str, timeout: float = 10.0, limit: int = 500) -> dict:
        for _ in range(limit):
            env = self.recv(timeout=timeout)
            if env["type"] == msg_type:
                return env
        raise TimeoutError(f"no {msg_type} within {limit} messages")

    def close(self):
        self.sock.close()
