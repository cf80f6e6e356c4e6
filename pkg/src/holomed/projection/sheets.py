"""Spritesheet packs.

A pack directory holds ``manifest.json`` plus one PNG per sheet. Sheets
1-7 are 40-frame rotation loops (9 degrees per frame); sheet 8 is the
single closing still, so the frame counts sum to 281. Each sheet stores
three view blocks (front, lateral-right, posterior) of ``frames`` cells,
laid out row-major; the left pyramid face reuses the lateral-right block
mirrored, so no fourth block exists on disk.

The placeholder generator stands in for rendered artwork: every cell shows
the sheet numeral and a rotation tick mark, tinted per view. Output is
byte-identical across runs for identical inputs.
"""

from __future__ import annotations

import json
import math
import struct
import zlib
from dataclasses import dataclass
from pathlib import Path
from typing import Dict

import numpy as np

from holomed.errors import PackError

PACK_FORMAT = "holomed-pack-1"
TOTAL_FRAMES = 281
ROTATION_FRAMES = 40
DEGREES_PER_FRAME = 9
SHEET_IDS = tuple(range(1, 9))
VIEWS = ("front", "lateral_right", "posterior")

_VIEW_TINT = {
    "front": (16, 24, 56),
    "lateral_right": (16, 52, 28),
    "posterior": (56, 20, 20),
}
_TICK_COLOR = (255, 208, 72)
_DIGIT_COLOR = (226, 226, 226)
_BORDER_COLOR = (96, 96, 96)

_DIGITS = {
    "1": ("..#..", ".##..", "..#..", "..#..", "..#..", "..#..", ".###."),
    "2": (".###.", "#...#", "....#", "...#.", "..#..", ".#...", "#####"),
    "3": (".###.", "#...#", "....#", "..##.", "....#", "#...#", ".###."),
    "4": ("...#.", "..##.", ".#.#.", "#..#.", "#####", "...#.", "...#."),
    "5": ("#####", "#....", "####.", "....#", "....#", "#...#", ".###."),
    "6": (".###.", "#....", "####.", "#...#", "#...#", "#...#", ".###."),
    "7": ("#####", "....#", "...#.", "..#..", "..#..", "..#..", "..#.."),
    "8": (".###.", "#...#", "#...#", ".###.", "#...#", "#...#", ".###."),
}


def sheet_frame_count(sheet_id: int) -> int:
    return 1 if sheet_id == 8 else ROTATION_FRAMES


@dataclass
class SpriteSheet:
    sheet_id: int
    frames: int
    columns: int
    cell_size: int
    view_offsets: Dict[str, int]
    file: str
    path: Path

    @property
    def is_final_sheet(self) -> bool:
        return self.frames == 1

    def cell_index(self, view: str, frame: int) -> int:
        return self.view_offsets[view] + (frame % self.frames)


@dataclass
class Pack:
    root: Path
    cell_size: int
    sheets: Dict[int, SpriteSheet]

    @property
    def total_frames(self) -> int:
        return sum(s.frames for s in self.sheets.values())


def write_png(path: Path, pixels: np.ndarray) -> None:
    """Minimal 8-bit RGB PNG writer; fixed zlib level keeps output stable."""
    h, w, _ = pixels.shape
    raw = b"".join(b"\x00" + pixels[y].tobytes() for y in range(h))

    def chunk(tag: bytes, data: bytes) -> bytes:
        crc = zlib.crc32(tag + data) & 0xFFFFFFFF
        return struct.pack(">I", len(data)) + tag + data + struct.pack(">I", crc)

    ihdr = struct.pack(">IIBBBBB", w, h, 8, 2, 0, 0, 0)
    png = (
        b"\x89PNG\r\n\x1a\n"
        + chunk(b"IHDR", ihdr)
        + chunk(b"IDAT", zlib.compress(raw, 6))
        + chunk(b"IEND", b"")
    )
    path.write_bytes(png)


def read_png_size(path: Path) -> tuple:
    data = path.read_bytes()
    if len(data) < 24 or data[:8] != b"\x89PNG\r\n\x1a\n" or data[12:16] != b"IHDR":
        raise PackError(f"{path.name}: not a PNG")
    w, h = struct.unpack(">II", data[16:24])
    return w, h


def _draw_digit(cell: np.ndarray, digit: str, x0: int, y0: int, scale: int) -> None:
    rows = _DIGITS[digit]
    for ry, row in enumerate(rows):
        for rx, ch in enumerate(row):
            if ch == "#":
                cell[
                    y0 + ry * scale : y0 + (ry + 1) * scale,
                    x0 + rx * scale : x0 + (rx + 1) * scale,
                ] = _DIGIT_COLOR


def render_cell(
    sheet_id: int, view: str, frame: int, cell_size: int, final: bool = False
) -> np.ndarray:
    """Deterministic placeholder cell: view tint, sheet numeral, and a tick
    mark rotated frame*9 degrees clockwise from 12 o'clock."""
    c = cell_size
    cell = np.zeros((c, c, 3), dtype=np.uint8)
    cell[:, :] = _VIEW_TINT[view]
    cell[0, :] = cell[-1, :] = _BORDER_COLOR
    cell[:, 0] = cell[:, -1] = _BORDER_COLOR
    scale = max(1, c // 16)
    _draw_digit(cell, str(sheet_id), 2 * scale, 2 * scale, scale)

    cx = cy = c // 2
    radius = int(c * 0.38)
    if final:
        # closing still: a ring instead of a rotation tick
        for d in range(0, 3600):
            a = math.radians(d / 10.0)
            px = cx + int(round(radius * math.sin(a)))
            py = cy - int(round(radius * math.cos(a)))
            cell[py, px] = _TICK_COLOR
    else:
        angle = math.radians(frame * DEGREES_PER_FRAME)
        dx, dy = math.sin(angle), -math.cos(angle)
        for step in range(4 * radius + 1):
            t = step / (4 * radius)
            px = cx + int(round(t * radius * dx))
            py = cy + int(round(t * radius * dy))
            cell[py, px] = _TICK_COLOR
    return cell


def _sheet_grid_shape(frames: int, columns: int) -> tuple:
    cells = 3 * frames
    rows = (cells + columns - 1) // columns
    return rows, cells


def generate_pack(out_dir, cell_size: int = 48) -> Pack:
    """Write a full placeholder pack (manifest + 8 PNGs) to ``out_dir``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    manifest = {"format": PACK_FORMAT, "cell_size": cell_size, "sheets": []}
    for sheet_id in SHEET_IDS:
        frames = sheet_frame_count(sheet_id)
        columns = 10 if frames > 1 else 3
        rows, cells = _sheet_grid_shape(frames, columns)
        grid = np.zeros((rows * cell_size, columns * cell_size, 3), dtype=np.uint8)
        for vi, view in enumerate(VIEWS):
            for frame in range(frames):
                idx = vi * frames + frame
                r, col = divmod(idx, columns)
                cell = render_cell(sheet_id, view, frame, cell_size, final=frames == 1)
                grid[
                    r * cell_size : (r + 1) * cell_size,
                    col * cell_size : (col + 1) * cell_size,
                ] = cell
        fname = f"sheet_{sheet_id}.png"
        write_png(out / fname, grid)
        manifest["sheets"].append(
            {
                "sheet_id": sheet_id,
                "frames": frames,
                "columns": columns,
                "file": fname,
                "view_offsets": {v: i * frames for i, v in enumerate(VIEWS)},
            }
        )
    (out / "manifest.json").write_text(
        json.dumps(manifest, sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )
    return load_pack(out)


def load_pack(pack_dir) -> Pack:
    """Load and verify a pack; any inconsistency raises PackError."""
    root = Path(pack_dir)
    manifest_path = root / "manifest.json"
    if not manifest_path.is_file():
        raise PackError(f"missing manifest.json in {root}")
    try:
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise PackError(f"manifest.json is not valid JSON: {e}") from None
    if manifest.get("format") != PACK_FORMAT:
        raise PackError(f"unsupported pack format {manifest.get('format')!r}")
    cell_size = manifest.get("cell_size")
    if not isinstance(cell_size, int) or cell_size < 8:
        raise PackError("cell_size must be an integer >= 8")
    entries = manifest.get("sheets")
    if not isinstance(entries, list):
        raise PackError("manifest has no sheet list")

    sheets: Dict[int, SpriteSheet] = {}
    for entry in entries:
        sid = entry.get("sheet_id")
        if sid not in SHEET_IDS:
            raise PackError(f"unknown sheet_id {sid!r}")
        if sid in sheets:
            raise PackError(f"duplicate sheet_id {sid}")
        frames = entry.get("frames")
        if not isinstance(frames, int) or frames < 1:
            raise PackError(f"sheet {sid}: bad frame count {frames!r}")
        columns = entry.get("columns")
        if not isinstance(columns, int) or columns < 1:
            raise PackError(f"sheet {sid}: bad column count {columns!r}")
        offsets = entry.get("view_offsets")
        if not isinstance(offsets, dict):
            raise PackError(f"sheet {sid}: missing view_offsets")
        for view in VIEWS:
            off = offsets.get(view)
            if not isinstance(off, int) or not (0 <= off <= 3 * frames - frames):
                raise PackError(f"sheet {sid}: bad offset for view {view}")
        fname = entry.get("file")
        path = root / str(fname)
        if not path.is_file():
            raise PackError(f"sheet {sid}: missing file {fname}")
        rows, _cells = _sheet_grid_shape(frames, columns)
        expect = (columns * cell_size, rows * cell_size)
        got = read_png_size(path)
        if got != expect:
            raise PackError(f"sheet {sid}: {fname} is {got}, expected {expect}")
        sheets[sid] = SpriteSheet(sid, frames, columns, cell_size, dict(offsets), str(fname), path)

    if sorted(sheets) != list(SHEET_IDS):
        raise PackError(f"expected sheets {list(SHEET_IDS)}, got {sorted(sheets)}")
    total = sum(s.frames for s in sheets.values())
    if total != TOTAL_FRAMES:
        raise PackError(f"pack holds {total} frames, expected {TOTAL_FRAMES}")
    return Pack(root, cell_size, sheets)
