# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the per-frame depth pipeline.

Semantics must match _kernels_py exactly; the parity test enforces it.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

# Moore neighborhood, clockwise screen order starting at West: (dx, dy).
cdef int[8] MOORE_DX = [-1, -1, 0, 1, 1, 1, 0, -1]
cdef int[8] MOORE_DY = [0, -1, -1, -1, 0, 1, 1, 1]


def median_filter3(object depth_in):
    """3x3 median over available (> 0) readings; no-reading pixels stay 0."""
    depth_arr = np.ascontiguousarray(depth_in, dtype=np.float64)
    cdef double[:, ::1] depth = depth_arr
    cdef Py_ssize_t h = depth.shape[0]
    cdef Py_ssize_t w = depth.shape[1]
    out_arr = np.zeros((h, w), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef double buf[9]
    cdef double key
    cdef double v
    cdef Py_ssize_t x, y, nx, ny, dx, dy, n, i, j
    for y in range(h):
        for x in range(w):
            if depth[y, x] <= 0:
                continue
            n = 0
            for dy in range(-1, 2):
                ny = y + dy
                if ny < 0 or ny >= h:
                    continue
                for dx in range(-1, 2):
                    nx = x + dx
                    if nx < 0 or nx >= w:
                        continue
                    v = depth[ny, nx]
                    if v > 0:
                        buf[n] = v
                        n += 1
            for i in range(1, n):
                key = buf[i]
                j = i - 1
                while j >= 0 and buf[j] > key:
                    buf[j + 1] = buf[j]
                    j -= 1
                buf[j + 1] = key
            if n % 2 == 1:
                out[y, x] = buf[n // 2]
            else:
                out[y, x] = 0.5 * (buf[n // 2 - 1] + buf[n // 2])
    return out_arr


def largest_component(object mask_in):
    """Largest 4-connected component; ties broken by smallest bbox
    top-left corner in row-major order. Returns (bool mask, count)."""
    mask_arr = np.ascontiguousarray(mask_in, dtype=np.uint8)
    cdef cnp.uint8_t[:, ::1] mask = mask_arr
    cdef Py_ssize_t h = mask.shape[0]
    cdef Py_ssize_t w = mask.shape[1]
    labels_arr = np.full((h, w), -1, dtype=np.int32)
    cdef int[:, ::1] labels = labels_arr
    stack_arr = np.empty(h * w, dtype=np.int64)
    cdef long long[::1] stack = stack_arr
    cdef Py_ssize_t sx, sy, x, y, top
    cdef long long flat
    cdef int label = 0, best_label = -1
    cdef long long size, best_size = 0
    cdef Py_ssize_t min_row, min_col, best_row = 0, best_col = 0
    for sy in range(h):
        for sx in range(w):
            if mask[sy, sx] == 0 or labels[sy, sx] >= 0:
                continue
            size = 0
            min_row = sy
            min_col = sx
            top = 0
            stack[top] = sy * w + sx
            top += 1
            labels[sy, sx] = label
            while top > 0:
                top -= 1
                flat = stack[top]
                y = flat // w
                x = flat % w
                size += 1
                if y < min_row:
                    min_row = y
                if x < min_col:
                    min_col = x
                if x > 0 and mask[y, x - 1] != 0 and labels[y, x - 1] < 0:
                    labels[y, x - 1] = label
                    stack[top] = flat - 1
                    top += 1
                if x + 1 < w and mask[y, x + 1] != 0 and labels[y, x + 1] < 0:
                    labels[y, x + 1] = label
                    stack[top] = flat + 1
                    top += 1
                if y > 0 and mask[y - 1, x] != 0 and labels[y - 1, x] < 0:
                    labels[y - 1, x] = label
                    stack[top] = flat - w
                    top += 1
                if y + 1 < h and mask[y + 1, x] != 0 and labels[y + 1, x] < 0:
                    labels[y + 1, x] = label
                    stack[top] = flat + w
                    top += 1
            if (
                best_label < 0
                or size > best_size
                or (
                    size == best_size
                    and (min_row < best_row or (min_row == best_row and min_col < best_col))
                )
            ):
                best_label = label
                best_size = size
                best_row = min_row
                best_col = min_col
            label += 1
    if best_label < 0:
        return np.zeros((h, w), dtype=bool), 0
    return labels_arr == best_label, int(best_size)


def trace_contour(object mask_in):
    """Moore-neighbor boundary trace; mirrors the Python backend."""
    mask_arr = np.ascontiguousarray(mask_in, dtype=np.uint8)
    cdef cnp.uint8_t[:, ::1] mask = mask_arr
    cdef Py_ssize_t h = mask.shape[0]
    cdef Py_ssize_t w = mask.shape[1]
    cdef Py_ssize_t sx = -1, sy = -1, x, y
    cdef long long count = 0
    # lexicographically smallest (x, y) set pixel
    for x in range(w):
        for y in range(h):
            if mask[y, x] != 0:
                if sx < 0:
                    sx = x
                    sy = y
                count += 1
    if sx < 0:
        return []
    cdef Py_ssize_t px = sx, py = sy
    cdef Py_ssize_t bx = sx - 1, by = sy
    cdef Py_ssize_t prev_x, prev_y, cx = 0, cy = 0
    cdef int base, k, found, v
    # start-pixel visits: index in points per backtrack direction (0..7)
    cdef long long[8] visit_at
    for k in range(8):
        visit_at[k] = -1
    cdef long long step, limit = 8 * count + 16
    points = []
    for step in range(limit):
        if px == sx and py == sy:
            base = -1
            for k in range(8):
                if sx + MOORE_DX[k] == bx and sy + MOORE_DY[k] == by:
                    base = k
                    break
            if visit_at[base] >= 0:
                return points[visit_at[base]:]
            visit_at[base] = len(points)
        points.append((int(px), int(py)))
        base = -1
        for k in range(8):
            if px + MOORE_DX[k] == bx and py + MOORE_DY[k] == by:
                base = k
                break
        found = 0
        prev_x = bx
        prev_y = by
        for k in range(8):
            cx = px + MOORE_DX[(base + k) % 8]
            cy = py + MOORE_DY[(base + k) % 8]
            if 0 <= cx < w and 0 <= cy < h and mask[cy, cx] != 0:
                found = 1
                break
            prev_x = cx
            prev_y = cy
        if found == 0:
            return [(sx, sy)]  # isolated pixel
        px = cx
        py = cy
        bx = prev_x
        by = prev_y
    raise RuntimeError("contour trace failed to close")
