"""Procedural depth-frame silhouettes for fixtures and tests.

The poses are simple block figures: a 3-px-wide torso, 2-px-thick arms.
They are deterministic given their parameters, so fixture files built from
them are reproducible.
"""

from __future__ import annotations

from typing import List, Optional

import numpy as np

from holomed.depth_gesture.types import DepthFrame

DEFAULT_DT_MS = 33


def blank_frame(width: int, height: int, timestamp: int) -> DepthFrame:
    return DepthFrame(width, height, np.zeros((height, width)), timestamp)


def uniform_frame(width: int, height: int, timestamp: int, depth: float) -> DepthFrame:
    return DepthFrame(width, height, np.full((height, width), float(depth)), timestamp)


def torso_top(height: int) -> int:
    return max(2, height // 5)


def shoulder_row(width: int, height: int) -> int:
    """Horizontal-arm height: above the body centroid (so the hand lands in
    the contour band) but below the raised-hands line, which sits one swipe
    threshold (width / 4) above the centroid."""
    return max(torso_top(height) + 1, int(0.6 * height - 0.25 * width) + 3)


def person_frame(
    width: int,
    height: int,
    timestamp: int,
    depth: float = 750,
    cx: Optional[int] = None,
    right_hand_x: Optional[int] = None,
    left_hand_x: Optional[int] = None,
    raised: bool = False,
    arm_row: Optional[int] = None,
) -> DepthFrame:
    """Block figure: torso plus optional horizontal arms or raised arms.

    ``right_hand_x``/``left_hand_x`` extend a 2-px arm from the torso to
    that column at shoulder height; ``raised`` draws two vertical arms
    whose hands end near the top of the frame.
    """
    if cx is None:
        cx = width // 2
    grid = np.zeros((height, width))
    top = torso_top(height)
    grid[top : height - 1, cx - 1 : cx + 2] = depth
    if arm_row is None:
        arm_row = shoulder_row(width, height)
    if right_hand_x is not None:
        grid[arm_row : arm_row + 2, cx + 2 : right_hand_x + 1] = depth
    if left_hand_x is not None:
        grid[arm_row : arm_row + 2, left_hand_x : cx - 1] = depth
    if raised:
        for side in (-1, 1):
            col = cx + side * 8
            grid[3 : top + 3, col - 1 : col + 1] = depth
        # connect shoulders so the mask stays one component
        grid[top : top + 2, cx - 9 : cx + 9] = depth
    return DepthFrame(width, height, grid, timestamp)


def swipe_stream(
    direction: str,
    width: int = 64,
    height: int = 48,
    depth: float = 750,
    t0: int = 0,
    dt_ms: int = DEFAULT_DT_MS,
    step_px: int = 3,
    steps: int = 10,
    cx: Optional[int] = None,
    idle_frames: int = 3,
) -> List[DepthFrame]:
    """One swipe: the right arm extends (direction 'right') or retracts
    (direction 'left'), followed by a few arms-down idle frames."""
    if cx is None:
        cx = width // 3
    lo = cx + 8
    hi = min(width - 3, lo + step_px * (steps - 1))
    xs = list(range(lo, hi + 1, step_px))
    if direction == "left":
        xs = list(reversed(xs))
    elif direction != "right":
        raise ValueError(f"unknown swipe direction {direction!r}")
    frames = []
    t = t0
    for x in xs:
        frames.append(person_frame(width, height, t, depth, cx=cx, right_hand_x=x))
        t += dt_ms
    for _ in range(idle_frames):
        frames.append(person_frame(width, height, t, depth, cx=cx))
        t += dt_ms
    return frames


def gesture_burst_stream(
    kinds,
    width: int = 64,
    height: int = 48,
    depth: float = 750,
    t0: int = 0,
    dt_ms: int = DEFAULT_DT_MS,
) -> List[DepthFrame]:
    """Concatenate swipe bursts for a list of 'right'/'left' directions."""
    frames: List[DepthFrame] = []
    t = t0
    for direction in kinds:
        burst = swipe_stream(direction, width, height, depth, t0=t, dt_ms=dt_ms)
        frames.extend(burst)
        t = burst[-1].timestamp + dt_ms
    return frames


def hold_stream(
    width: int = 64,
    height: int = 48,
    depth: float = 750,
    t0: int = 0,
    dt_ms: int = DEFAULT_DT_MS,
    frames_n: int = 24,
) -> List[DepthFrame]:
    """Static one-arm pose held long enough to read as HoldStill."""
    cx = width // 3
    x = min(width - 3, cx + 16)
    return [
        person_frame(width, height, t0 + i * dt_ms, depth, cx=cx, right_hand_x=x)
        for i in range(frames_n)
    ]


def raise_stream(
    width: int = 64,
    height: int = 48,
    depth: float = 750,
    t0: int = 0,
    dt_ms: int = DEFAULT_DT_MS,
    frames_n: int = 24,
) -> List[DepthFrame]:
    """Static both-arms-raised pose, held for most of a window."""
    return [
        person_frame(width, height, t0 + i * dt_ms, depth, raised=True)
        for i in range(frames_n)
    ]


def add_reading_noise(
    frames: List[DepthFrame], amplitude_mm: float, rng: np.random.Generator
) -> List[DepthFrame]:
    """Additive uniform noise on valid readings only (0 stays no-reading)."""
    noisy = []
    for f in frames:
        grid = np.asarray(f.samples, dtype=np.float64).copy()
        jitter = rng.uniform(-amplitude_mm, amplitude_mm, size=grid.shape)
        grid = np.where(grid > 0, np.maximum(1.0, grid + jitter), 0.0)
        noisy.append(DepthFrame(f.width, f.height, grid, f.timestamp))
    return noisy
