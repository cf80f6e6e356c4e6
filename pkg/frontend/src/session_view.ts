// Student progress view, mirroring server state from the streamed
// AnswerEvaluated / ScheduleUpdate messages.

import type { AnswerEvaluated, Envelope } from "./types.js";

export interface SessionViewState {
  sessionId: string;
  studentName: string;
  stageIndex: number;
  score: number;
  lastOutcome: string;
  captureBanner: boolean;
  connection: string;
}

export function initialView(sessionId: string, studentName: string): SessionViewState {
  return {
    sessionId,
    studentName,
    stageIndex: 1,
    score: 0,
    lastOutcome: "-",
    captureBanner: false,
    connection: "connecting",
  };
}

/** Fold one streamed envelope into the view. Correct answers bump the
 * score immediately, so the view tracks the server within one message. */
export function applyEnvelope(view: SessionViewState, env: Envelope): SessionViewState {
  if (env.type !== "AnswerEvaluated") return view;
  const payload = env.payload as unknown as AnswerEvaluated;
  if (payload.session_id && payload.session_id !== view.sessionId) return view;
  const next = { ...view };
  next.lastOutcome = payload.outcome;
  next.stageIndex = payload.stage_index;
  if (payload.outcome === "Correct") next.score += 1;
  if (payload.outcome === "CaptureError") next.captureBanner = true;
  else if (payload.outcome !== "CaptureRetry") next.captureBanner = false;
  return next;
}
