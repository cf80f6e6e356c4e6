// Thin fetch wrapper for the document CRUD and session endpoints.
// The fetch implementation is injectable so tests can run without a server.

import type { Collection, DocumentJson, GestureKind } from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    public status: number,
    message: string,
    public field?: string,
  ) {
    super(message);
  }
}

export class ConflictError extends ApiError {
  constructor(message: string) {
    super(409, message);
  }
}

async function parseError(response: Response): Promise<never> {
  let message = `${response.status}`;
  let field: string | undefined;
  try {
    const body = await response.json();
    message = body.error ?? message;
    field = body.field;
  } catch {
    // non-JSON error body; keep the status text
  }
  if (response.status === 409) throw new ConflictError(message);
  throw new ApiError(response.status, message, field);
}

export class Api {
  constructor(
    private base: string = "",
    private fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request(url: string, init?: RequestInit): Promise<any> {
    const response = await this.fetchFn(this.base + url, init);
    if (!response.ok) await parseError(response);
    return response.json();
  }

  list(collection: Collection, filter?: Record<string, string>): Promise<DocumentJson[]> {
    const qs = filter ? "?" + new URLSearchParams(filter).toString() : "";
    return this.request(`/api/${collection}${qs}`).then((r) => r.documents);
  }

  get(collection: Collection, id: string): Promise<DocumentJson> {
    return this.request(`/api/${collection}/${id}`);
  }

  insert(collection: Collection, body: unknown): Promise<DocumentJson> {
    return this.request(`/api/${collection}`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  // compare-and-set save: expectedRevision 0 means "must not exist yet"
  save(
    collection: Collection,
    id: string,
    body: unknown,
    expectedRevision?: number,
  ): Promise<DocumentJson> {
    const headers: Record<string, string> = { "Content-Type": "application/json" };
    if (expectedRevision !== undefined) {
      headers["X-Expected-Revision"] = String(expectedRevision);
    }
    return this.request(`/api/${collection}/${id}`, {
      method: "PUT",
      headers,
      body: JSON.stringify(body),
    });
  }

  remove(collection: Collection, id: string): Promise<{ deleted: boolean }> {
    return this.request(`/api/${collection}/${id}`, { method: "DELETE" });
  }

  startSession(studentId: string, lessonId: string): Promise<any> {
    return this.request("/api/sessions/start", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ student_id: studentId, lesson_id: lessonId }),
    });
  }

  submitGesture(
    sessionId: string,
    kind: GestureKind | null,
    captureOk: boolean,
  ): Promise<any> {
    return this.request("/api/gestures", {
      method: "POST",
      headers: {
        "Content-Type": "application/json",
        "X-Session-Id": sessionId,
      },
      body: JSON.stringify({
        kind: kind ?? "SwipeRight",
        median_depth_mm: 750,
        status: "InBand",
        capture_ok: captureOk,
      }),
    });
  }

  validateLesson(id: string): Promise<{ violations: string[] }> {
    return this.request(`/api/lessons/${id}/validate`);
  }

  latency(): Promise<any> {
    return this.request("/api/latency");
  }

  manifest(): Promise<any> {
    return this.request("/assets/manifest.json");
  }
}
