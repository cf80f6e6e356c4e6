// Streaming connection with long-poll fallback.
//
// Both transports deliver the same envelope sequence; the socket factory
// and fetch are injectable so tests can drive the client synchronously.

import type { Envelope, Role } from "./types.js";
import type { FetchLike } from "./api.js";

export interface SocketLike {
  send(data: string): void;
  close(): void;
  onopen: ((ev?: unknown) => void) | null;
  onmessage: ((ev: { data: string }) => void) | null;
  onclose: ((ev?: unknown) => void) | null;
  onerror: ((ev?: unknown) => void) | null;
}

export interface StreamOptions {
  base?: string;
  role: Role;
  sessionId?: string;
  onEnvelope: (env: Envelope) => void;
  onStatus?: (status: "connecting" | "streaming" | "polling" | "closed") => void;
  makeSocket?: (url: string) => SocketLike;
  fetchFn?: FetchLike;
  pollWaitS?: number;
}

export function parseEnvelope(data: string): Envelope | null {
  try {
    const obj = JSON.parse(data);
    if (typeof obj !== "object" || obj === null) return null;
    if (typeof obj.type !== "string" || typeof obj.seq !== "number") return null;
    return obj as Envelope;
  } catch {
    return null;
  }
}

export class StreamClient {
  private socket: SocketLike | null = null;
  private polling = false;
  private closed = false;
  private cursor = 0;

  constructor(private opts: StreamOptions) {}

  start(): void {
    this.connect();
  }

  private status(s: "connecting" | "streaming" | "polling" | "closed") {
    this.opts.onStatus?.(s);
  }

  private connect(): void {
    if (this.closed) return;
    this.status("connecting");
    const base = this.opts.base ?? "";
    const wsBase = base
      ? base.replace(/^http/, "ws")
      : `${location.protocol === "https:" ? "wss" : "ws"}://${location.host}`;
    let socket: SocketLike;
    try {
      socket = (this.opts.makeSocket ?? ((url) => new WebSocket(url) as unknown as SocketLike))(
        `${wsBase}/ws`,
      );
    } catch {
      this.startPolling();
      return;
    }
    this.socket = socket;
    socket.onopen = () => {
      const hello = {
        type: "Hello",
        seq: 1,
        sent_ms: Date.now(),
        payload: { role: this.opts.role, session_id: this.opts.sessionId ?? "" },
      };
      socket.send(JSON.stringify(hello));
      this.status("streaming");
    };
    socket.onmessage = (ev) => {
      const env = parseEnvelope(ev.data);
      if (env) this.opts.onEnvelope(env);
    };
    socket.onclose = () => {
      this.socket = null;
      if (!this.closed) this.startPolling();
    };
    socket.onerror = () => {
      try {
        socket.close();
      } catch {
        // already gone
      }
    };
  }

  // fallback: batched envelopes over GET /api/poll, same sequence
  private startPolling(): void {
    if (this.polling || this.closed) return;
    this.polling = true;
    this.status("polling");
    void this.pollLoop();
  }

  private async pollLoop(): Promise<void> {
    const fetchFn = this.opts.fetchFn ?? ((url: string) => fetch(url));
    const base = this.opts.base ?? "";
    while (!this.closed) {
      try {
        const wait = this.opts.pollWaitS ?? 10;
        const response = await fetchFn(
          `${base}/api/poll?since=${this.cursor}&role=${this.opts.role}&wait=${wait}`,
        );
        if (!response.ok) throw new Error(String(response.status));
        const batch = await response.json();
        for (const env of batch.envelopes as Envelope[]) {
          this.cursor = Math.max(this.cursor, env.seq);
          this.opts.onEnvelope(env);
        }
        if (batch.envelopes.length === 0) this.cursor = Math.max(this.cursor, batch.next);
      } catch {
        await new Promise((r) => setTimeout(r, 1000));
      }
    }
  }

  close(): void {
    this.closed = true;
    this.socket?.close();
    this.status("closed");
  }
}

/** Keeps only the newest schedule; stale frames are never queued. */
export class NewestSchedule<T> {
  private latest: T | null = null;

  offer(schedule: T): void {
    this.latest = schedule;
  }

  take(): T | null {
    const s = this.latest;
    this.latest = null;
    return s;
  }

  peek(): T | null {
    return this.latest;
  }
}
