// Page wiring: live pyramid preview, session panel with the gesture
// simulator, captions, and the admin CRUD forms.

import { Api, ApiError } from "./api.js";
import {
  KINDS,
  MEANINGS,
  saveWithRevision,
  validateBindingMap,
  validateHologramOptions,
  validateQuestion,
} from "./forms.js";
import { CanvasSurface, PyramidRenderer } from "./pyramid.js";
import { NewestSchedule, StreamClient } from "./stream.js";
import { SpeechQueue } from "./speech.js";
import { applyEnvelope, initialView, SessionViewState } from "./session_view.js";
import { GestureSimulator } from "./simulator.js";
import type {
  Collection,
  DocumentJson,
  Envelope,
  FrameSchedule,
  GestureKind,
  PackManifest,
} from "./types.js";

const api = new Api();

const $ = (id: string) => document.getElementById(id)!;

let view: SessionViewState | null = null;
let simulator: GestureSimulator | null = null;
let renderer: PyramidRenderer | null = null;
const schedules = new NewestSchedule<FrameSchedule>();

const speech = new SpeechQueue((text) => {
  const captions = $("captions");
  const line = document.createElement("div");
  line.textContent = text;
  captions.appendChild(line);
  while (captions.childElementCount > 6) captions.removeChild(captions.firstChild!);
});

function renderSessionView(): void {
  if (!view) return;
  $("sv-session").textContent = view.sessionId || "-";
  $("sv-student").textContent = view.studentName || "-";
  $("sv-stage").textContent = String(view.stageIndex);
  $("sv-score").textContent = String(view.score);
  $("sv-outcome").textContent = view.lastOutcome;
  $("capture-banner").classList.toggle("hidden", !view.captureBanner);
}

function onEnvelope(env: Envelope): void {
  if (env.type === "ScheduleUpdate") {
    const schedule = env.payload as unknown as FrameSchedule;
    if (!view || !schedule.session_id || schedule.session_id === view.sessionId) {
      schedules.offer(schedule);
    }
    return;
  }
  if (env.type === "SpeakText") {
    speech.enqueue(String(env.payload.text ?? ""));
    return;
  }
  if (env.type === "ErrorNotice") {
    speech.enqueue(`Server notice: ${env.payload.text}`);
    return;
  }
  if (view) {
    const next = applyEnvelope(view, env);
    if (next !== view) {
      view = next;
      renderSessionView();
    }
  }
}

function drawLoop(): void {
  const schedule = schedules.take(); // newest wins, stale frames dropped
  if (schedule && renderer) renderer.render(schedule);
  requestAnimationFrame(drawLoop);
}

async function setupPyramid(): Promise<void> {
  const manifest = (await api.manifest()) as PackManifest;
  const images = new Map<number, HTMLImageElement>();
  await Promise.all(
    manifest.sheets.map(
      (sheet) =>
        new Promise<void>((resolve) => {
          const img = new Image();
          img.onload = () => {
            images.set(sheet.sheet_id, img);
            resolve();
          };
          img.onerror = () => resolve(); // missing sheets draw placeholders
          img.src = `/assets/${sheet.file}`;
        }),
    ),
  );
  const canvas = $("pyramid") as HTMLCanvasElement;
  const ctx = canvas.getContext("2d")!;
  const half = canvas.width / 2;
  const quadrant = (face: string) => {
    const positions: Record<string, { x: number; y: number }> = {
      front: { x: half / 2, y: half },
      right: { x: half, y: half / 2 },
      posterior: { x: half / 2, y: 0 },
      left: { x: 0, y: half / 2 },
    };
    return { ...positions[face], size: half };
  };
  const surface = new CanvasSurface(ctx, images, quadrant, () => 0);
  renderer = new PyramidRenderer(manifest, surface);
  requestAnimationFrame(drawLoop);
}

async function startSession(): Promise<void> {
  const studentName = ($("student-name") as HTMLInputElement).value.trim() || "console-student";
  try {
    const students = await api.list("students", { name: studentName });
    const studentId = students.length
      ? students[0].id
      : (await api.insert("students", { name: studentName })).id;
    const lessons = await api.list("lessons");
    if (!lessons.length) throw new ApiError(404, "no lessons authored yet");
    const info = await api.startSession(studentId, lessons[0].id);
    view = initialView(info.session_id, studentName);
    view.stageIndex = info.stage_index;
    simulator = new GestureSimulator(api, info.session_id);
    renderSessionView();
    speech.enqueue(info.prompt);
  } catch (e) {
    speech.enqueue(`Could not start session: ${(e as Error).message}`);
  }
}

async function sendGesture(kind: GestureKind | "fail"): Promise<void> {
  if (!simulator) {
    speech.enqueue("Start a session first.");
    return;
  }
  const result =
    kind === "fail" ? await simulator.failCapture() : await simulator.send(kind);
  if (result.error) speech.enqueue(result.error);
  $("sim-result").textContent = result.error ?? `${result.outcome}`;
}

// -- admin forms -------------------------------------------------------------

const EDITABLE: Collection[] = [
  "lessons",
  "questions",
  "gesture_bindings",
  "hologram_options",
  "students",
  "teachers",
];

let adminCollection: Collection = "questions";
let editing: DocumentJson | null = null;

function clientValidate(collection: Collection, body: Record<string, unknown>) {
  if (collection === "questions") return validateQuestion(body);
  if (collection === "hologram_options") return validateHologramOptions(body);
  if (collection === "gesture_bindings") {
    return validateBindingMap((body.map as Record<string, string>) ?? {});
  }
  return {};
}

async function refreshAdminList(): Promise<void> {
  const docs = await api.list(adminCollection);
  const list = $("admin-list");
  list.innerHTML = "";
  for (const doc of docs) {
    const row = document.createElement("div");
    row.className = "admin-row";
    const label = document.createElement("span");
    label.textContent = `${doc.id} (rev ${doc.revision})`;
    const edit = document.createElement("button");
    edit.textContent = "edit";
    edit.onclick = () => {
      editing = doc;
      ($("admin-body") as HTMLTextAreaElement).value = JSON.stringify(doc.body, null, 2);
      $("admin-editing").textContent = `${adminCollection}/${doc.id} @ rev ${doc.revision}`;
      $("admin-errors").textContent = "";
    };
    const del = document.createElement("button");
    del.textContent = "delete";
    del.onclick = async () => {
      await api.remove(adminCollection, doc.id);
      await refreshAdminList();
    };
    row.append(label, edit, del);
    list.appendChild(row);
  }
}

async function saveAdminDoc(): Promise<void> {
  const errorsEl = $("admin-errors");
  errorsEl.textContent = "";
  let body: Record<string, unknown>;
  try {
    body = JSON.parse(($("admin-body") as HTMLTextAreaElement).value);
  } catch (e) {
    errorsEl.textContent = `not valid JSON: ${(e as Error).message}`;
    return;
  }
  const clientErrors = clientValidate(adminCollection, body);
  if (Object.keys(clientErrors).length) {
    errorsEl.textContent = Object.entries(clientErrors)
      .map(([field, message]) => `${field}: ${message}`)
      .join("\n");
    return;
  }
  try {
    if (!editing) {
      await api.insert(adminCollection, body);
    } else {
      const result = await saveWithRevision(
        api,
        adminCollection,
        editing.id,
        body,
        editing.revision,
      );
      if (result.kind === "conflict") {
        const reload = confirm(
          `Someone else saved revision ${result.current.revision} meanwhile. ` +
            "Reload their version into the editor? (Cancel keeps your text.)",
        );
        if (reload) {
          editing = result.current;
          ($("admin-body") as HTMLTextAreaElement).value = JSON.stringify(
            result.current.body,
            null,
            2,
          );
          $("admin-editing").textContent =
            `${adminCollection}/${editing.id} @ rev ${editing.revision}`;
        } else {
          editing = { ...editing, revision: result.current.revision };
        }
        errorsEl.textContent = "conflict: document changed on the server";
        return;
      }
      if (result.kind === "invalid") {
        errorsEl.textContent = `${result.field}: ${result.message}`;
        return;
      }
      editing = result.doc;
    }
    await refreshAdminList();
    $("admin-editing").textContent = "saved";
  } catch (e) {
    errorsEl.textContent = (e as Error).message;
  }
}

function newAdminDoc(): void {
  editing = null;
  const templates: Partial<Record<Collection, unknown>> = {
    questions: {
      lesson_id: "lesson-default",
      stage_index: 1,
      prompt: "",
      correct: true,
      hint: "",
      position: 0,
    },
    gesture_bindings: {
      name: "custom",
      map: Object.fromEntries(KINDS.map((k, i) => [k, MEANINGS[i] ?? ""])),
    },
    hologram_options: {
      name: "custom",
      size_scale: 1.0,
      intensity: 0.8,
      angle_deg: 47.0,
      rotation_period_ms: 1600,
    },
    students: { name: "" },
    teachers: { name: "" },
  };
  ($("admin-body") as HTMLTextAreaElement).value = JSON.stringify(
    templates[adminCollection] ?? {},
    null,
    2,
  );
  $("admin-editing").textContent = `new ${adminCollection} document`;
  $("admin-errors").textContent = "";
}

function setupAdmin(): void {
  const tabs = $("admin-tabs");
  for (const collection of EDITABLE) {
    const tab = document.createElement("button");
    tab.textContent = collection;
    tab.onclick = () => {
      adminCollection = collection;
      editing = null;
      void refreshAdminList();
      newAdminDoc();
    };
    tabs.appendChild(tab);
  }
  $("admin-save").onclick = () => void saveAdminDoc();
  $("admin-new").onclick = () => newAdminDoc();
  void refreshAdminList();
  newAdminDoc();
}

function setupSimulator(): void {
  const buttons: Array<[string, GestureKind | "fail"]> = [
    ["sim-yes", "SwipeRight"],
    ["sim-no", "SwipeLeft"],
    ["sim-raise", "RaiseBoth"],
    ["sim-hold", "HoldStill"],
    ["sim-fail", "fail"],
  ];
  for (const [id, kind] of buttons) {
    $(id).onclick = () => void sendGesture(kind);
  }
  $("start-session").onclick = () => void startSession();
}

function main(): void {
  const stream = new StreamClient({
    role: "Console",
    onEnvelope,
    onStatus: (status) => {
      $("conn-status").textContent = status;
      if (view) {
        view.connection = status;
      }
    },
  });
  stream.start();
  setupSimulator();
  setupAdmin();
  void setupPyramid();
}

main();
