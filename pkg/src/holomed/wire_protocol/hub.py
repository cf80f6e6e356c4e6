"""Broadcast fan-out with bounded per-client queues.

Every connected client owns a FIFO queue; broadcast enqueues and never
waits. A client whose queue is full (a stalled reader) is kicked rather
than allowed to block the schedule stream for everyone else.

A bounded history ring backs the long-poll fallback: poll clients read the
same message sequence (batched) by channel sequence number.
"""

from __future__ import annotations

import asyncio
import itertools
import time
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Set

from holomed.wire_protocol.messages import Envelope

DEFAULT_MAX_QUEUE = 256
DEFAULT_HISTORY = 4096


@dataclass
class ClientHandle:
    client_id: int
    role: str
    queue: asyncio.Queue
    session_id: str = ""
    alive: bool = True
    close_reason: str = ""
    on_kick: Optional[Callable[[], None]] = None
    _seq: itertools.count = field(default_factory=lambda: itertools.count(1))

    def next_seq(self) -> int:
        return next(self._seq)


class BroadcastHub:
    def __init__(
        self,
        max_queue: int = DEFAULT_MAX_QUEUE,
        history_limit: int = DEFAULT_HISTORY,
        now_ms: Callable[[], float] = lambda: time.monotonic() * 1000.0,
    ):
        self.max_queue = max_queue
        self.now_ms = now_ms
        self._clients: Dict[int, ClientHandle] = {}
        self._next_id = itertools.count(1)
        self._history: deque = deque(maxlen=history_limit)
        self._chan_seq = 0
        self._activity: Optional[asyncio.Event] = None

    # -- connections -------------------------------------------------------

    def register(self, role: str, session_id: str = "") -> ClientHandle:
        handle = ClientHandle(
            client_id=next(self._next_id),
            role=role,
            queue=asyncio.Queue(maxsize=self.max_queue),
            session_id=session_id,
        )
        self._clients[handle.client_id] = handle
        return handle

    def unregister(self, handle: ClientHandle) -> None:
        handle.alive = False
        self._clients.pop(handle.client_id, None)

    def kick(self, handle: ClientHandle, reason: str) -> None:
        handle.close_reason = reason
        self.unregister(handle)
        if handle.on_kick is not None:
            handle.on_kick()

    @property
    def client_count(self) -> int:
        return len(self._clients)

    def clients_by_role(self, role: str) -> List[ClientHandle]:
        return [h for h in self._clients.values() if h.role == role]

    # -- fan-out -------------------------------------------------------------

    def broadcast(
        self,
        msg_type: str,
        payload: Dict,
        roles: Optional[Set[str]] = None,
    ) -> int:
        """Enqueue to every live client matching the role filter; returns
        the number of queues reached. Full queues get their client kicked."""
        self._chan_seq += 1
        now = self.now_ms()
        self._history.append((self._chan_seq, msg_type, payload, roles, now))
        if self._activity is not None:
            self._activity.set()
        delivered = 0
        for handle in list(self._clients.values()):
            if roles is not None and handle.role not in roles:
                continue
            envelope = Envelope(msg_type, handle.next_seq(), now, payload)
            try:
                handle.queue.put_nowait(envelope)
                delivered += 1
            except asyncio.QueueFull:
                self.kick(handle, "slow-consumer")
        return delivered

    # -- long-poll fallback ----------------------------------------------------

    @property
    def chan_seq(self) -> int:
        return self._chan_seq

    def backlog(self, since: int, role: str) -> List[Dict]:
        out = []
        for chan_seq, msg_type, payload, roles, sent in self._history:
            if chan_seq <= since:
                continue
            if roles is not None and role not in roles:
                continue
            out.append(
                {"type": msg_type, "seq": chan_seq, "sent_ms": sent, "payload": payload}
            )
        return out

    async def poll(self, since: int, role: str, wait_s: float = 10.0) -> Dict:
        """Batched envelopes after channel seq ``since`` for ``role``,
        waiting up to ``wait_s`` for the first new message."""
        if self._activity is None:
            self._activity = asyncio.Event()
        deadline = time.monotonic() + wait_s
        while True:
            self._activity.clear()  # before the check: no missed wakeups
            batch = self.backlog(since, role)
            remaining = deadline - time.monotonic()
            if batch or remaining <= 0:
                break
            try:
                await asyncio.wait_for(self._activity.wait(), timeout=remaining)
            except asyncio.TimeoutError:
                batch = self.backlog(since, role)
                break
        return {"since": since, "next": self._chan_seq, "envelopes": batch}
