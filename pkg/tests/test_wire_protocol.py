"""Envelope codec, broadcast hub, latency metrics."""

import asyncio
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from holomed.errors import DecodeError, InputError
from holomed.wire_protocol import (
    BroadcastHub,
    Envelope,
    LatencySample,
    decode,
    encode,
    measure_latency,
)


def run(coro):
    return asyncio.new_event_loop().run_until_complete(coro)


SAMPLE_ENVELOPES = [
    Envelope("Hello", 1, 0.0, {"role": "Console"}),
    Envelope("Hello", 2, 1.5, {"role": "GestureSource", "session_id": "s1"}),
    Envelope(
        "GestureDetected",
        3,
        2.0,
        {"kind": "SwipeRight", "median_depth_mm": 750, "status": "InBand", "capture_ok": True},
    ),
    Envelope(
        "AnswerEvaluated", 4, 3.0, {"outcome": "Correct", "speak_text": "ok", "stage_index": 2}
    ),
    Envelope(
        "ScheduleUpdate",
        5,
        4.0,
        {"tick": 7, "sheet_id": 1, "frame_index": 7, "faces": [], "fps": 25},
    ),
    Envelope("SpeakText", 6, 5.0, {"text": "Stage 2: descent"}),
    Envelope("ErrorNotice", 7, 6.0, {"code": "shutdown", "text": "bye"}),
    Envelope("Ping", 8, 7.0, {"nonce": 41}),
    Envelope("Pong", 9, 8.0, {"nonce": 41, "echo_ms": 7.0}),
]


class TestCodec:
    @pytest.mark.parametrize("env", SAMPLE_ENVELOPES, ids=lambda e: f"{e.type}-{e.seq}")
    def test_round_trip(self, env):
        assert decode(encode(env)) == env

    def test_unknown_payload_field_dropped(self):
        raw = json.dumps(
            {
                "type": "SpeakText",
                "seq": 1,
                "sent_ms": 0,
                "payload": {"text": "hi", "volume": 11},
            }
        )
        assert decode(raw).payload == {"text": "hi"}

    def test_unknown_type_rejected(self):
        raw = json.dumps({"type": "Telemetry", "seq": 1, "sent_ms": 0, "payload": {}})
        with pytest.raises(DecodeError):
            decode(raw)

    def test_missing_required_field(self):
        raw = json.dumps({"type": "SpeakText", "seq": 1, "sent_ms": 0, "payload": {}})
        with pytest.raises(DecodeError, match="SpeakText.text"):
            decode(raw)

    def test_malformed_bytes_name_offset(self):
        data = encode(SAMPLE_ENVELOPES[0])[:-7]
        with pytest.raises(DecodeError) as err:
            decode(data)
        assert "byte" in str(err.value)

    @given(st.integers(1, 120))
    @settings(max_examples=80, deadline=None)
    def test_truncation_fuzz_never_crashes(self, cut):
        data = encode(SAMPLE_ENVELOPES[2])
        cut = min(cut, len(data) - 1)
        try:
            decode(data[:cut])
        except DecodeError:
            pass  # the only acceptable failure mode

    def test_seq_must_be_positive(self):
        raw = json.dumps({"type": "Ping", "seq": 0, "sent_ms": 0, "payload": {"nonce": 1}})
        with pytest.raises(DecodeError):
            decode(raw)


class DrainingClient:
    """Test helper: a hub client whose queue is drained into a list."""

    def __init__(self, hub, role):
        self.handle = hub.register(role)
        self.received = []

    def drain(self):
        while not self.handle.queue.empty():
            self.received.append(self.handle.queue.get_nowait())
        return self.received


class TestHub:
    def test_broadcast_counts_matching_roles(self):
        async def main():
            hub = BroadcastHub()
            clients = [DrainingClient(hub, "Projection") for _ in range(3)]
            DrainingClient(hub, "Console")
            n = hub.broadcast("SpeakText", {"text": "x"}, roles={"Projection"})
            assert n == 3
            for c in clients:
                assert len(c.drain()) == 1

        run(main())

    def test_zero_clients_is_fine(self):
        async def main():
            hub = BroadcastHub()
            assert hub.broadcast("SpeakText", {"text": "x"}) == 0

        run(main())

    def test_stalled_client_kicked_others_unaffected(self):
        async def main():
            hub = BroadcastHub(max_queue=256)
            stalled = hub.register("Projection")
            kicked = []
            stalled.on_kick = lambda: kicked.append(True)
            healthy = DrainingClient(hub, "Projection")
            for i in range(256):
                assert hub.broadcast("SpeakText", {"text": str(i)}) == 2
                healthy.drain()  # a live reader keeps its queue short
            # stalled queue full now: that client goes, the healthy one stays
            n = hub.broadcast("SpeakText", {"text": "overflow"})
            assert n == 1
            assert kicked == [True]
            assert stalled.close_reason == "slow-consumer"
            assert hub.client_count == 1
            healthy.drain()
            assert len(healthy.received) == 257

        run(main())

    def test_per_connection_fifo_seq(self):
        async def main():
            hub = BroadcastHub()
            late_joiner_sees = []
            a = DrainingClient(hub, "Console")
            for i in range(5):
                hub.broadcast("SpeakText", {"text": str(i)})
            b = DrainingClient(hub, "Console")
            for i in range(5, 8):
                hub.broadcast("SpeakText", {"text": str(i)})
            assert [e.seq for e in a.drain()] == list(range(1, 9))
            late_joiner_sees = [e.seq for e in b.drain()]
            assert late_joiner_sees == [1, 2, 3]

        run(main())

    def test_poll_fallback_sees_same_sequence(self):
        async def main():
            hub = BroadcastHub()
            ws = DrainingClient(hub, "Console")
            texts = [str(i) for i in range(7)]
            for t in texts:
                hub.broadcast("SpeakText", {"text": t}, roles={"Console"})
            # batched reads with a moving cursor
            polled = []
            cursor = 0
            while True:
                batch = await hub.poll(cursor, "Console", wait_s=0)
                if not batch["envelopes"]:
                    break
                polled.extend(e["payload"]["text"] for e in batch["envelopes"])
                cursor = batch["envelopes"][-1]["seq"]
            streamed = [e.payload["text"] for e in ws.drain()]
            assert polled == streamed == texts

        run(main())

    def test_poll_waits_for_activity(self):
        async def main():
            hub = BroadcastHub()

            async def later():
                await asyncio.sleep(0.05)
                hub.broadcast("SpeakText", {"text": "ping"})

            task = asyncio.ensure_future(later())
            batch = await hub.poll(0, "Console", wait_s=2.0)
            await task
            assert [e["payload"]["text"] for e in batch["envelopes"]] == ["ping"]

        run(main())

    def test_disconnect_leaves_other_streams_alone(self):
        async def main():
            hub = BroadcastHub()
            a = DrainingClient(hub, "Console")
            b = DrainingClient(hub, "Console")
            hub.broadcast("SpeakText", {"text": "1"})
            hub.unregister(a.handle)
            hub.broadcast("SpeakText", {"text": "2"})
            assert [e.payload["text"] for e in b.drain()] == ["1", "2"]
            assert [e.payload["text"] for e in a.drain()] == ["1"]

        run(main())


class TestLatency:
    def make(self, seq, render_ms, eval_ms=10.0, stage=1):
        t0 = 1000.0
        return LatencySample(
            gesture_seq=seq,
            stage_index=stage,
            t_capture=0.0,
            t_received=t0,
            t_evaluated=t0 + eval_ms,
            t_broadcast=t0 + render_ms,
        )

    def test_avg_46(self):
        samples = [self.make(i, ms, eval_ms=ms / 2) for i, ms in enumerate([40, 50, 48])]
        report = measure_latency(samples)
        assert report["overall"]["gesture_to_render"]["avg"] == 46
        assert report["overall"]["gesture_to_render"]["min"] == 40
        assert report["overall"]["gesture_to_render"]["max"] == 50

    def test_avg_80_eval(self):
        samples = [self.make(i, 100, eval_ms=80) for i in range(3)]
        report = measure_latency(samples)
        assert report["overall"]["gesture_to_eval"]["avg"] == 80

    def test_single_sample_avg_min_max_equal(self):
        report = measure_latency([self.make(1, 42.5, eval_ms=11.5)])
        stats = report["overall"]["gesture_to_render"]
        assert stats["avg"] == stats["min"] == stats["max"] == 42.5

    def test_empty_report(self):
        assert measure_latency([]) == {"count": 0, "overall": {}, "per_stage": {}}

    def test_per_stage_breakdown(self):
        samples = [self.make(i, 40 + i, stage=1 + i % 2) for i in range(4)]
        report = measure_latency(samples)
        assert set(report["per_stage"]) == {"1", "2"}

    def test_clock_ordering_enforced(self):
        with pytest.raises(InputError):
            LatencySample(1, 1, 0.0, 100.0, 90.0, 120.0)
