"""Compare the compiled depth kernels against the pure-Python fallback.

Usage: python benchmarks/bench_kernels.py [--frames N]

The per-frame pipeline (median filter, component labeling, contour trace)
is the hot loop of the whole system; everything else is control plane.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from holomed.depth_gesture import _kernels_py as py_impl
from holomed.depth_gesture import synth

try:
    from holomed.depth_gesture import _kernels_cy as cy_impl
except ImportError:
    cy_impl = None


def make_frame(width: int, height: int) -> np.ndarray:
    frame = synth.person_frame(width, height, 0, right_hand_x=int(width * 0.7))
    grid = np.asarray(frame.samples)
    rng = np.random.default_rng(7)
    noise = rng.uniform(-20, 20, size=grid.shape)
    return np.where(grid > 0, grid + noise, 0.0)


def bench(fn, arg, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(arg)
        best = min(best, time.perf_counter() - t0)
    return best * 1000.0


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    sizes = [(320, 240), (640, 480)]
    print(f"{'kernel':<22}{'size':<12}{'python ms':>12}{'cython ms':>12}{'speedup':>10}")
    for width, height in sizes:
        depth = make_frame(width, height)
        filtered = py_impl.median_filter3(depth)
        mask = (filtered >= 400) & (filtered <= 1500)
        blob, _ = py_impl.largest_component(mask)
        cases = [
            ("median_filter3", lambda m: m.median_filter3, depth),
            ("largest_component", lambda m: m.largest_component, mask),
            ("trace_contour", lambda m: m.trace_contour, blob.astype(np.uint8)),
        ]
        for name, pick, arg in cases:
            t_py = bench(pick(py_impl), arg, args.repeat)
            if cy_impl is None:
                print(f"{name:<22}{width}x{height:<8}{t_py:>12.3f}{'n/a':>12}{'-':>10}")
                continue
            t_cy = bench(pick(cy_impl), arg, args.repeat)
            print(
                f"{name:<22}{f'{width}x{height}':<12}{t_py:>12.3f}{t_cy:>12.3f}"
                f"{t_py / t_cy:>9.1f}x"
            )


if __name__ == "__main__":
    main()
