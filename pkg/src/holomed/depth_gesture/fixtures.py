"""Depth-sequence fixture files.

Format (text, UTF-8):

    DSEQ1 <width> <height> <frame_count>
    T <timestamp_ms>
    <height lines of width space-separated millimeter values>
    ... repeated per frame
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable, List

import numpy as np

from holomed.depth_gesture.types import DepthFrame
from holomed.errors import FixtureParseError

MAGIC = "DSEQ1"


def write_dseq(path, frames: Iterable[DepthFrame]) -> None:
    frames = list(frames)
    if not frames:
        raise ValueError("cannot write an empty sequence")
    w, h = frames[0].width, frames[0].height
    lines = [f"{MAGIC} {w} {h} {len(frames)}"]
    for f in frames:
        lines.append(f"T {f.timestamp}")
        grid = np.asarray(f.samples)
        for row in grid:
            lines.append(" ".join(str(int(v)) for v in row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_dseq(path) -> List[DepthFrame]:
    text = Path(path).read_text(encoding="utf-8")
    lines = text.splitlines()
    if not lines:
        raise FixtureParseError("empty file", 1)
    header = lines[0].split()
    if len(header) != 4 or header[0] != MAGIC:
        raise FixtureParseError(f"expected '{MAGIC} <w> <h> <n>' header", 1)
    try:
        width, height, count = int(header[1]), int(header[2]), int(header[3])
    except ValueError:
        raise FixtureParseError("non-integer header field", 1) from None

    frames: List[DepthFrame] = []
    ln = 1  # 0-based index of the next unread line
    last_ts = None
    for _ in range(count):
        if ln >= len(lines):
            raise FixtureParseError("unexpected end of file", len(lines))
        parts = lines[ln].split()
        if len(parts) != 2 or parts[0] != "T":
            raise FixtureParseError("expected 'T <timestamp_ms>'", ln + 1)
        try:
            ts = int(parts[1])
        except ValueError:
            raise FixtureParseError("non-integer timestamp", ln + 1) from None
        if last_ts is not None and ts <= last_ts:
            raise FixtureParseError("timestamps must strictly increase", ln + 1)
        last_ts = ts
        ln += 1
        rows = []
        for _ in range(height):
            if ln >= len(lines):
                raise FixtureParseError("unexpected end of file", len(lines))
            vals = lines[ln].split()
            if len(vals) != width:
                raise FixtureParseError(
                    f"expected {width} values, got {len(vals)}", ln + 1
                )
            try:
                rows.append([int(v) for v in vals])
            except ValueError:
                raise FixtureParseError("non-integer depth value", ln + 1) from None
            ln += 1
        frames.append(DepthFrame(width, height, np.array(rows, dtype=np.float64), ts))
    return frames
