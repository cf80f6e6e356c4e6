"""Pure-Python/numpy kernel implementations.

Fallback backend for the compiled extension; same semantics, selected at
import by :mod:`holomed.depth_gesture.kernels`.
"""

from __future__ import annotations

import warnings
from collections import deque

import numpy as np

# Moore neighborhood in clockwise screen order (y grows downward),
# starting at West. Offsets are (dx, dy).
_MOORE = ((-1, 0), (-1, -1), (0, -1), (1, -1), (1, 0), (1, 1), (0, 1), (-1, 1))
_MOORE_INDEX = {off: i for i, off in enumerate(_MOORE)}


def median_filter3(depth: np.ndarray) -> np.ndarray:
    """3x3 median over available readings.

    A reading is a sample > 0; zeros mean the sensor returned nothing for
    that pixel and are excluded from every neighborhood. Pixels without a
    reading stay 0. Even-sized neighborhoods take the mean of the two
    middle values.
    """
    depth = np.asarray(depth, dtype=np.float64)
    h, w = depth.shape
    vals = np.where(depth > 0, depth, np.nan)
    pad = np.full((h + 2, w + 2), np.nan)
    pad[1:-1, 1:-1] = vals
    stack = np.empty((9, h, w))
    i = 0
    for dy in range(3):
        for dx in range(3):
            stack[i] = pad[dy : dy + h, dx : dx + w]
            i += 1
    with warnings.catch_warnings():
        # all-NaN neighborhoods (no-reading pixels) are overwritten below
        warnings.simplefilter("ignore", RuntimeWarning)
        med = np.nanmedian(stack, axis=0)
    return np.where(depth > 0, med, 0.0)


def largest_component(mask: np.ndarray) -> tuple[np.ndarray, int]:
    """Largest 4-connected component of a boolean grid.

    Ties are broken by the smallest bounding-box top-left corner in
    row-major order. Returns (component mask, pixel count); an all-False
    grid yields (all-False, 0).
    """
    mask = np.asarray(mask, dtype=bool)
    h, w = mask.shape
    labels = np.full((h, w), -1, dtype=np.int32)
    best = None  # (size, min_row, min_col, label)
    label = 0
    for sy in range(h):
        for sx in range(w):
            if not mask[sy, sx] or labels[sy, sx] >= 0:
                continue
            size = 0
            min_row, min_col = sy, sx
            queue = deque([(sx, sy)])
            labels[sy, sx] = label
            while queue:
                x, y = queue.popleft()
                size += 1
                if y < min_row:
                    min_row = y
                if x < min_col:
                    min_col = x
                for nx, ny in ((x - 1, y), (x + 1, y), (x, y - 1), (x, y + 1)):
                    if 0 <= nx < w and 0 <= ny < h and mask[ny, nx] and labels[ny, nx] < 0:
                        labels[ny, nx] = label
                        queue.append((nx, ny))
            key = (-size, min_row, min_col)
            if best is None or key < best[0]:
                best = (key, label)
            label += 1
    if best is None:
        return np.zeros((h, w), dtype=bool), 0
    out = labels == best[1]
    return out, int(-best[0][0])


def trace_contour(mask: np.ndarray) -> list:
    """Moore-neighbor boundary trace of a non-empty boolean grid.

    Starts at the lexicographically smallest (x, y) set pixel and walks the
    outer boundary, scanning each Moore neighborhood clockwise from the
    backtrack pixel. The walk terminates when it re-enters the start pixel
    with a previously seen backtrack (the entry-direction stopping rule);
    the closed cycle from that earlier visit onward is the contour, so
    single-pixel-wide limbs are traversed on both sides.
    """
    mask = np.asarray(mask, dtype=bool)
    h, w = mask.shape
    ys, xs = np.nonzero(mask)
    if len(xs) == 0:
        return []
    order = np.lexsort((ys, xs))
    sx, sy = int(xs[order[0]]), int(ys[order[0]])

    def is_set(x: int, y: int) -> bool:
        return 0 <= x < w and 0 <= y < h and mask[y, x]

    start = (sx, sy)
    p, back = start, (sx - 1, sy)  # west neighbor unset: sx is the minimal x
    points = []
    start_visits = {}  # backtrack -> index in points
    limit = 8 * len(xs) + 16
    for _ in range(limit):
        if p == start:
            if back in start_visits:
                return points[start_visits[back]:]
            start_visits[back] = len(points)
        points.append(p)
        base = _MOORE_INDEX[(back[0] - p[0], back[1] - p[1])]
        nxt = None
        prev = back
        for k in range(8):
            dx, dy = _MOORE[(base + k) % 8]
            cand = (p[0] + dx, p[1] + dy)
            if is_set(*cand):
                nxt = cand
                break
            prev = cand
        if nxt is None:
            return [start]  # isolated pixel
        p, back = nxt, prev
    raise RuntimeError("contour trace failed to close")
