import { describe, expect, it } from "vitest";

import { parseEnvelope, StreamClient, SocketLike } from "../src/stream.js";
import type { Envelope } from "../src/types.js";

class FakeSocket implements SocketLike {
  sent: string[] = [];
  onopen: ((ev?: unknown) => void) | null = null;
  onmessage: ((ev: { data: string }) => void) | null = null;
  onclose: ((ev?: unknown) => void) | null = null;
  onerror: ((ev?: unknown) => void) | null = null;
  closed = false;

  send(data: string): void {
    this.sent.push(data);
  }

  close(): void {
    this.closed = true;
    this.onclose?.();
  }

  push(env: Envelope): void {
    this.onmessage?.({ data: JSON.stringify(env) });
  }
}

function envelope(type: string, seq: number, payload: Record<string, unknown>): Envelope {
  return { type, seq, sent_ms: 0, payload };
}

describe("parseEnvelope", () => {
  it("accepts well-formed frames and rejects junk", () => {
    expect(parseEnvelope('{"type":"SpeakText","seq":1,"sent_ms":0,"payload":{}}')).toBeTruthy();
    expect(parseEnvelope("not json")).toBeNull();
    expect(parseEnvelope('{"seq":1}')).toBeNull();
    expect(parseEnvelope("42")).toBeNull();
  });
});

describe("StreamClient", () => {
  it("sends Hello with its role on open, then dispatches envelopes in order", () => {
    const socket = new FakeSocket();
    const seen: Envelope[] = [];
    const client = new StreamClient({
      base: "http://server",
      role: "Console",
      onEnvelope: (env) => seen.push(env),
      makeSocket: () => socket,
    });
    client.start();
    socket.onopen?.();
    const hello = JSON.parse(socket.sent[0]);
    expect(hello.type).toBe("Hello");
    expect(hello.payload.role).toBe("Console");
    socket.push(envelope("SpeakText", 1, { text: "a" }));
    socket.push(envelope("SpeakText", 2, { text: "b" }));
    expect(seen.map((e) => e.payload.text)).toEqual(["a", "b"]);
    client.close();
  });

  it("falls back to polling and observes the same sequence", async () => {
    const broadcast = [
      envelope("AnswerEvaluated", 1, { outcome: "Correct", speak_text: "", stage_index: 1 }),
      envelope("SpeakText", 2, { text: "next" }),
      envelope("ScheduleUpdate", 3, { tick: 1, sheet_id: 1, frame_index: 1, faces: [], fps: 25 }),
    ];

    // streaming run
    const socket = new FakeSocket();
    const streamed: Envelope[] = [];
    const wsClient = new StreamClient({
      base: "http://server",
      role: "Console",
      onEnvelope: (env) => streamed.push(env),
      makeSocket: () => socket,
    });
    wsClient.start();
    socket.onopen?.();
    for (const env of broadcast) socket.push(env);
    wsClient.close();

    // polling run against a fake /api/poll serving the same history
    const polled: Envelope[] = [];
    let polls = 0;
    const pollClient = new StreamClient({
      base: "http://server",
      role: "Console",
      onEnvelope: (env) => polled.push(env),
      makeSocket: () => {
        throw new Error("no websocket available");
      },
      fetchFn: async (url) => {
        polls += 1;
        const since = Number(new URL(url).searchParams.get("since"));
        const batch = broadcast.filter((e) => e.seq > since);
        if (polls > 3) pollClient.close();
        return new Response(
          JSON.stringify({ since, next: 3, envelopes: batch }),
          { status: 200 },
        );
      },
    });
    pollClient.start();
    await new Promise((r) => setTimeout(r, 20));
    expect(polled.map((e) => [e.type, e.seq])).toEqual(
      streamed.map((e) => [e.type, e.seq]),
    );
  });
});
