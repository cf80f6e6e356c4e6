"""End-to-end server behavior over real sockets."""

import asyncio
import json

import numpy as np
import pytest

from holomed.defaults import DEFAULT_LESSON_ID
from holomed.depth_gesture import synth
from holomed.depth_gesture.fixtures import write_dseq
from holomed.server.replay import run_replay
from holomed.server.runtime import Server, StartupError

from server_harness import RunningServer, WsClient


@pytest.fixture
def running(server_config):
    with RunningServer(server_config()) as rs:
        yield rs


def start_session(client):
    student = client.get("/api/students").json()["documents"][0]["id"]
    response = client.post(
        "/api/sessions/start",
        json={"student_id": student, "lesson_id": DEFAULT_LESSON_ID},
    )
    assert response.status_code == 200, response.text
    return response.json()


def submit(client, session_id, kind="SwipeRight", capture_ok=True):
    return client.post(
        "/api/gestures",
        headers={"X-Session-Id": session_id},
        json={
            "kind": kind,
            "median_depth_mm": 750,
            "status": "InBand",
            "capture_ok": capture_ok,
        },
    )


class TestSessions:
    def test_start_session_returns_prompt(self, running):
        with running.client() as client:
            info = start_session(client)
            assert info["stage_index"] == 1
            assert info["phase"] == "AwaitingAnswer"
            assert "Stage 1" in info["prompt"]

    def test_unknown_student_404(self, running):
        with running.client() as client:
            response = client.post(
                "/api/sessions/start",
                json={"student_id": "missing", "lesson_id": DEFAULT_LESSON_ID},
            )
            assert response.status_code == 404

    def test_unknown_lesson_404(self, running):
        with running.client() as client:
            student = client.get("/api/students").json()["documents"][0]["id"]
            response = client.post(
                "/api/sessions/start",
                json={"student_id": student, "lesson_id": "missing"},
            )
            assert response.status_code == 404

    def test_lesson_failing_integrity_400(self, running):
        with running.client() as client:
            student = client.get("/api/students").json()["documents"][0]["id"]
            stages = [
                {"index": i, "name": f"S{i}", "description": "d", "sheet_id": i}
                for i in range(1, 9)
            ]
            # schema-valid lesson, but nobody authored questions for it
            lesson = client.post(
                "/api/lessons", json={"title": "empty", "stages": stages}
            ).json()
            response = client.post(
                "/api/sessions/start",
                json={"student_id": student, "lesson_id": lesson["id"]},
            )
            assert response.status_code == 400
            assert "has no questions" in response.json()["error"]


class TestGestureSubmission:
    def test_correct_answer_round_trip(self, running):
        with running.client() as client:
            session = start_session(client)
            response = submit(client, session["session_id"], "SwipeRight")
            assert response.status_code == 200
            body = response.json()
            assert body["outcome"] == "Correct"
            assert body["stage_index"] == 2

    def test_wrong_answer_keeps_stage(self, running):
        with running.client() as client:
            session = start_session(client)
            body = submit(client, session["session_id"], "SwipeLeft").json()
            assert body["outcome"] == "Incorrect"
            assert body["stage_index"] == 1

    def test_three_capture_failures_emit_capture_error(self, running):
        with running.client() as client:
            session = start_session(client)
            sid = session["session_id"]
            first = submit(client, sid, capture_ok=False).json()
            second = submit(client, sid, capture_ok=False).json()
            third = submit(client, sid, capture_ok=False).json()
            assert first["outcome"] == "CaptureRetry"
            assert second["outcome"] == "CaptureRetry"
            assert third["outcome"] == "CaptureError"

    def test_unknown_session_404_and_no_state_change(self, running):
        with running.client() as client:
            response = submit(client, "deadbeef")
            assert response.status_code == 404
            assert client.get("/api/sessions").json()["documents"] == []

    def test_invalid_body_names_field(self, running):
        with running.client() as client:
            session = start_session(client)
            response = client.post(
                "/api/gestures",
                headers={"X-Session-Id": session["session_id"]},
                json={"kind": "SwipeRight", "capture_ok": "yes"},
            )
            assert response.status_code == 400
            assert response.json()["field"] == "capture_ok"


class TestCrudEndpoints:
    def test_insert_get_list_delete(self, running):
        with running.client() as client:
            doc = client.post("/api/students", json={"name": "Ada"}).json()
            assert doc["revision"] == 1
            got = client.get(f"/api/students/{doc['id']}").json()
            assert got["body"] == {"name": "Ada"}
            listed = client.get("/api/students", params={"name": "Ada"}).json()
            assert [d["id"] for d in listed["documents"]] == [doc["id"]]
            assert client.delete(f"/api/students/{doc['id']}").json()["deleted"]
            assert not client.delete(f"/api/students/{doc['id']}").json()["deleted"]

    def test_compare_and_set_conflict_409(self, running):
        with running.client() as client:
            doc = client.post("/api/teachers", json={"name": "Turing"}).json()
            ok = client.put(
                f"/api/teachers/{doc['id']}",
                json={"name": "A. Turing"},
                headers={"X-Expected-Revision": "1"},
            )
            assert ok.status_code == 200 and ok.json()["revision"] == 2
            stale = client.put(
                f"/api/teachers/{doc['id']}",
                json={"name": "stale"},
                headers={"X-Expected-Revision": "1"},
            )
            assert stale.status_code == 409

    def test_unknown_collection_rejected(self, running):
        with running.client() as client:
            assert client.get("/api/courses").status_code == 400
            assert client.post("/api/courses", json={}).status_code == 400

    def test_filter_coercion_and_unknown_field(self, running):
        with running.client() as client:
            docs = client.get("/api/questions", params={"stage_index": "3"}).json()
            assert all(d["body"]["stage_index"] == 3 for d in docs["documents"])
            assert len(docs["documents"]) == 1
            bad = client.get("/api/questions", params={"flavor": "sour"})
            assert bad.status_code == 400

    def test_schema_violation_field_path(self, running):
        with running.client() as client:
            response = client.post(
                "/api/gesture_bindings",
                json={"name": "dup", "map": {"SwipeRight": "AnswerYes", "SwipeLeft": "AnswerYes"}},
            )
            assert response.status_code == 400
            assert response.json()["field"].startswith("map.")

    def test_validate_lesson_endpoint(self, running):
        with running.client() as client:
            report = client.get(f"/api/lessons/{DEFAULT_LESSON_ID}/validate").json()
            assert report["violations"] == []
            assert client.get("/api/lessons/missing/validate").status_code == 404


class TestStreaming:
    def test_schedule_stream_and_ping(self, running):
        ws = WsClient(running, "Projection")
        try:
            env = ws.recv_until("ScheduleUpdate")
            payload = env["payload"]
            assert payload["fps"] == 25
            assert len(payload["faces"]) == 4
            left = [f for f in payload["faces"] if f["face"] == "left"][0]
            assert left["mirrored"] is True
            ws.send("Ping", {"nonce": 7}, seq=2)
            pong = ws.recv_until("Pong")
            assert pong["payload"]["nonce"] == 7
        finally:
            ws.close()

    def test_bad_hello_gets_error_notice(self, running):
        ws = WsClient.__new__(WsClient)
        from websockets.sync.client import connect

        ws.sock = connect(running.ws_url, open_timeout=10)
        ws.sock.send(json.dumps({"type": "Ping", "seq": 1, "sent_ms": 0, "payload": {"nonce": 1}}))
        env = json.loads(ws.sock.recv(timeout=10))
        assert env["type"] == "ErrorNotice"
        ws.sock.close()

    def test_answer_broadcast_reaches_console(self, running):
        ws = WsClient(running, "Console")
        try:
            with running.client() as client:
                session = start_session(client)
                submit(client, session["session_id"], "SwipeRight")
            env = ws.recv_until("AnswerEvaluated")
            assert env["payload"]["outcome"] == "Correct"
            assert env["payload"]["session_id"] == session["session_id"]
        finally:
            ws.close()

    def test_per_connection_seq_is_gapless(self, running):
        ws = WsClient(running, "Console")
        try:
            seqs = [ws.recv()["seq"] for _ in range(20)]
            assert seqs == list(range(seqs[0], seqs[0] + 20))
            assert seqs[0] == 1
        finally:
            ws.close()

    def test_poll_fallback_sees_same_answer_sequence(self, running):
        ws = WsClient(running, "Console")
        try:
            with running.client() as client:
                session = start_session(client)
                cursor = 0
                # drain anything already broadcast before our submissions
                batch = client.get(
                    "/api/poll", params={"since": cursor, "role": "Console", "wait": 0}
                ).json()
                cursor = batch["next"]
                kinds = ["SwipeRight", "SwipeLeft", "SwipeRight"]
                for kind in kinds:
                    submit(client, session["session_id"], kind)
                polled = []
                while len(polled) < 3:
                    batch = client.get(
                        "/api/poll",
                        params={"since": cursor, "role": "Console", "wait": 2},
                    ).json()
                    for env in batch["envelopes"]:
                        if env["type"] == "AnswerEvaluated":
                            polled.append(env["payload"]["outcome"])
                    cursor = batch["next"]
                streamed = []
                while len(streamed) < 3:
                    env = ws.recv_until("AnswerEvaluated")
                    streamed.append(env["payload"]["outcome"])
                assert polled == streamed
        finally:
            ws.close()

    def test_disconnecting_client_leaves_others_streaming(self, running):
        a = WsClient(running, "Projection")
        b = WsClient(running, "Projection")
        a.recv_until("ScheduleUpdate")
        b.recv_until("ScheduleUpdate")
        a.close()
        b.recv_until("ScheduleUpdate")
        b.close()


class TestReplaySource:
    def test_replay_clean_swipes(self, running, tmp_path):
        fixture = tmp_path / "swipes.dseq"
        write_dseq(fixture, synth.gesture_burst_stream(["right", "left"]))
        summary = run_replay(fixture, running.url, speed=0, quiet=True)
        assert summary.gestures == {"SwipeRight": 1, "SwipeLeft": 1}
        assert summary.outcomes == {"Correct": 1, "Incorrect": 1}
        assert summary.statuses["InBand"] == summary.frames

    def test_replay_out_of_gate_fixture(self, running, tmp_path):
        fixture = tmp_path / "faraway.dseq"
        frames = [
            synth.person_frame(64, 48, t * 33, depth=2000, right_hand_x=40 + t)
            for t in range(6)
        ]
        write_dseq(fixture, frames)
        summary = run_replay(fixture, running.url, speed=0, quiet=True)
        assert summary.submissions == 0
        assert summary.statuses == {"OutOfGate": 6}

    def test_latency_report_populates(self, running, tmp_path):
        fixture = tmp_path / "one.dseq"
        write_dseq(fixture, synth.gesture_burst_stream(["right"]))
        run_replay(fixture, running.url, speed=0, quiet=True)
        with running.client() as client:
            report = client.get("/api/latency").json()
            assert report["count"] >= 1
            assert "gesture_to_render" in report["overall"]


class TestRobustness:
    def test_malformed_requests_never_crash(self, running, rng):
        garbage = [
            b"",
            b"{",
            b"[]",
            b'{"kind":',
            b"\x00\xff\xfe\x01",
            bytes(rng.integers(0, 256, size=64, dtype=np.uint8)),
        ]
        with running.client() as client:
            for payload in garbage:
                for path in ("/api/gestures", "/api/sessions/start", "/api/questions"):
                    response = client.post(
                        path,
                        content=payload,
                        headers={
                            "Content-Type": "application/json",
                            "X-Session-Id": "nope",
                        },
                    )
                    assert response.status_code in (400, 404, 422), (path, payload)
            # stream side: junk before and after Hello answers with ErrorNotice
            from websockets.sync.client import connect

            sock = connect(running.ws_url, open_timeout=10)
            sock.send("not json at all")
            env = json.loads(sock.recv(timeout=10))
            assert env["type"] == "ErrorNotice"
            sock.close()
            ws = WsClient(running, "Console")
            ws.send("GestureDetected", {
                "kind": "SwipeRight", "median_depth_mm": 1, "status": "x", "capture_ok": True,
            }, seq=2)
            env = ws.recv_until("ErrorNotice")
            assert env["payload"]["code"] == "unsupported"
            ws.close()
            # the listener is still healthy
            assert client.get("/api/latency").status_code == 200


class TestStartupAndShutdown:
    def test_missing_pack_fails_at_assets_stage(self, server_config, tmp_path):
        config = server_config(pack_dir=tmp_path / "nopack")
        config.pack_dir.mkdir()
        server = Server(config, quiet=True)
        with pytest.raises(StartupError, match="assets"):
            asyncio.new_event_loop().run_until_complete(server.serve())
        # store was rolled back cleanly: journals compacted to snapshots
        assert (config.store_dir / "students" / "snapshot.json").exists()

    def test_shutdown_broadcasts_error_notice(self, server_config):
        with RunningServer(server_config()) as rs:
            ws = WsClient(rs, "Console")
            ws.recv_until("ScheduleUpdate")
            rs.loop.call_soon_threadsafe(rs.server.request_shutdown)
            env = ws.recv_until("ErrorNotice", timeout=10)
            assert env["payload"]["code"] == "shutdown"
            ws.close()

    def test_restart_idempotence_without_writes(self, server_config):
        config = server_config()
        with RunningServer(config):
            pass
        snapshot = (config.store_dir / "lessons" / "snapshot.json").read_bytes()
        with RunningServer(server_config()):
            pass
        assert (config.store_dir / "lessons" / "snapshot.json").read_bytes() == snapshot
