// Admin CRUD form logic: client-side validation mirroring the server
// schemas, and conflict-safe saves through compare-and-set revisions.

import { Api, ConflictError } from "./api.js";
import type { Collection, DocumentJson } from "./types.js";

export const MEANINGS = ["AnswerYes", "AnswerNo", "NextLesson", "Hint", "LogOff"] as const;
export const KINDS = ["SwipeRight", "SwipeLeft", "RaiseBoth", "HoldStill"] as const;

export interface FieldErrorMap {
  [field: string]: string;
}

/** Same rules the server enforces: injective map, yes and no both bound. */
export function validateBindingMap(map: Record<string, string>): FieldErrorMap {
  const errors: FieldErrorMap = {};
  const seen = new Map<string, string>();
  for (const [kind, meaning] of Object.entries(map)) {
    if (!meaning) continue;
    const holder = seen.get(meaning);
    if (holder) {
      errors[`map.${kind}`] = `${meaning} is already bound to ${holder}`;
    } else {
      seen.set(meaning, kind);
    }
  }
  for (const required of ["AnswerYes", "AnswerNo"]) {
    if (!seen.has(required)) errors["map"] = `${required} must be bound`;
  }
  return errors;
}

export function validateQuestion(body: Record<string, unknown>): FieldErrorMap {
  const errors: FieldErrorMap = {};
  if (!body.lesson_id) errors["lesson_id"] = "required";
  const stage = Number(body.stage_index);
  if (!Number.isInteger(stage) || stage < 1) errors["stage_index"] = "must be >= 1";
  if (!String(body.prompt ?? "").trim()) errors["prompt"] = "must not be empty";
  if (typeof body.correct !== "boolean") errors["correct"] = "must be true or false";
  return errors;
}

export function validateHologramOptions(body: Record<string, unknown>): FieldErrorMap {
  const errors: FieldErrorMap = {};
  if (!(Number(body.size_scale) > 0)) errors["size_scale"] = "must be > 0";
  const intensity = Number(body.intensity);
  if (!(intensity >= 0 && intensity <= 1)) errors["intensity"] = "must be in [0, 1]";
  const angle = Number(body.angle_deg);
  if (!(angle > 40 && angle < 50)) errors["angle_deg"] = "must be in (40, 50)";
  if (!(Number(body.rotation_period_ms) >= 400)) {
    errors["rotation_period_ms"] = "must be >= 400 ms";
  }
  return errors;
}

export type SaveResult =
  | { kind: "saved"; doc: DocumentJson }
  | { kind: "conflict"; current: DocumentJson }
  | { kind: "invalid"; field: string; message: string };

/**
 * Save with the revision the editor was opened at. On a concurrent edit
 * the server answers 409; we reload the current document and let the
 * caller run its reload-and-merge prompt instead of overwriting silently.
 */
export async function saveWithRevision(
  api: Api,
  collection: Collection,
  id: string,
  body: Record<string, unknown>,
  editedRevision: number,
): Promise<SaveResult> {
  try {
    const doc = await api.save(collection, id, body, editedRevision);
    return { kind: "saved", doc };
  } catch (e) {
    if (e instanceof ConflictError) {
      const current = await api.get(collection, id);
      return { kind: "conflict", current };
    }
    if (e instanceof Error && "field" in e) {
      const err = e as Error & { field?: string };
      return { kind: "invalid", field: err.field ?? "", message: e.message };
    }
    throw e;
  }
}
