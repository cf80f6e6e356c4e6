// Wire and document shapes, matching the server's /api and /ws surface.

export type Role = "GestureSource" | "Projection" | "Console";

export interface Envelope {
  type: string;
  seq: number;
  sent_ms: number;
  payload: Record<string, unknown>;
}

export interface FaceEntry {
  face: "front" | "right" | "posterior" | "left";
  view: "front" | "lateral_right" | "posterior";
  frame_index: number;
  mirrored: boolean;
  correction: number;
}

export interface FrameSchedule {
  tick: number;
  sheet_id: number;
  frame_index: number | "Final";
  faces: FaceEntry[];
  fps: number;
  session_id?: string;
}

export interface AnswerEvaluated {
  outcome: string;
  speak_text: string;
  stage_index: number;
  session_id?: string;
}

export interface SheetEntry {
  sheet_id: number;
  frames: number;
  columns: number;
  file: string;
  view_offsets: Record<string, number>;
}

export interface PackManifest {
  format: string;
  cell_size: number;
  sheets: SheetEntry[];
}

export interface DocumentJson {
  id: string;
  revision: number;
  body: Record<string, unknown>;
}

export type GestureKind = "SwipeRight" | "SwipeLeft" | "RaiseBoth" | "HoldStill";

export const COLLECTIONS = [
  "students",
  "teachers",
  "lessons",
  "questions",
  "gesture_bindings",
  "hologram_options",
  "sessions",
  "latency_samples",
] as const;

export type Collection = (typeof COLLECTIONS)[number];
