// Four-quadrant pyramid preview.
//
// The draw surface is an interface so the render sequence is testable
// without a canvas: tests record (sheet, frame, face) triples, the browser
// implementation blits spritesheet cells with mirroring and the vertical
// correction factor.

import type { FaceEntry, FrameSchedule, PackManifest, SheetEntry } from "./types.js";

export interface CellRect {
  x: number;
  y: number;
  w: number;
  h: number;
}

export function sheetEntry(manifest: PackManifest, sheetId: number): SheetEntry {
  const entry = manifest.sheets.find((s) => s.sheet_id === sheetId);
  if (!entry) throw new Error(`manifest has no sheet ${sheetId}`);
  return entry;
}

export function cellRect(
  sheet: SheetEntry,
  view: string,
  frame: number,
  cellSize: number,
): CellRect {
  const offset = sheet.view_offsets[view];
  if (offset === undefined) throw new Error(`sheet ${sheet.sheet_id} has no view ${view}`);
  const index = offset + (((frame % sheet.frames) + sheet.frames) % sheet.frames);
  const row = Math.floor(index / sheet.columns);
  const col = index % sheet.columns;
  return { x: col * cellSize, y: row * cellSize, w: cellSize, h: cellSize };
}

export interface DrawSurface {
  drawCell(face: FaceEntry, sheetId: number, rect: CellRect): void;
  missingCell?(face: FaceEntry, sheetId: number, label: string): void;
  clear?(): void;
}

export interface DrawnTriple {
  sheet: number;
  frame: number;
  face: string;
}

export class PyramidRenderer {
  readonly drawn: DrawnTriple[] = [];

  constructor(
    private manifest: PackManifest,
    private surface: DrawSurface,
  ) {}

  render(schedule: FrameSchedule): void {
    this.surface.clear?.();
    for (const face of schedule.faces) {
      let rect: CellRect | null = null;
      try {
        const sheet = sheetEntry(this.manifest, schedule.sheet_id);
        rect = cellRect(sheet, face.view, face.frame_index, this.manifest.cell_size);
      } catch (e) {
        // missing asset: visible placeholder, not a crash
        this.surface.missingCell?.(
          face,
          schedule.sheet_id,
          `sheet ${schedule.sheet_id} / frame ${face.frame_index}`,
        );
        continue;
      }
      this.surface.drawCell(face, schedule.sheet_id, rect);
      this.drawn.push({
        sheet: schedule.sheet_id,
        frame: face.frame_index,
        face: face.face,
      });
    }
  }
}

/** Browser surface: quadrants on one canvas, fed by pre-loaded sheet images. */
export class CanvasSurface implements DrawSurface {
  constructor(
    private ctx: CanvasRenderingContext2D,
    private images: Map<number, HTMLImageElement>,
    private quadrant: (face: string) => { x: number; y: number; size: number },
    private sheetForFace: (face: FaceEntry) => number,
  ) {}

  clear(): void {
    const c = this.ctx.canvas;
    this.ctx.fillStyle = "#05070d";
    this.ctx.fillRect(0, 0, c.width, c.height);
  }

  drawCell(face: FaceEntry, sheetId: number, rect: CellRect): void {
    const image = this.images.get(sheetId);
    const q = this.quadrant(face.face);
    if (!image) {
      this.missingCell(face, sheetId, `sheet ${sheetId}`);
      return;
    }
    const ctx = this.ctx;
    ctx.save();
    // vertical pre-scale by the correction factor, mirrored left face
    const drawH = q.size * face.correction;
    const cx = q.x + q.size / 2;
    const cy = q.y + q.size / 2;
    ctx.translate(cx, cy);
    if (face.mirrored) ctx.scale(-1, 1);
    ctx.drawImage(image, rect.x, rect.y, rect.w, rect.h, -q.size / 2, -drawH / 2, q.size, drawH);
    ctx.restore();
  }

  missingCell(face: FaceEntry, _sheetId: number, label: string): void {
    const q = this.quadrant(face.face);
    const ctx = this.ctx;
    ctx.save();
    ctx.strokeStyle = "#a33";
    ctx.strokeRect(q.x + 2, q.y + 2, q.size - 4, q.size - 4);
    ctx.fillStyle = "#caa";
    ctx.font = "10px monospace";
    ctx.fillText(label, q.x + 6, q.y + q.size / 2);
    ctx.restore();
  }
}
