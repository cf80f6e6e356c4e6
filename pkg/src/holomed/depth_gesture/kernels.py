"""Kernel backend selection.

The compiled extension is preferred; the numpy/Python fallback has
identical semantics. Set HOLOMED_PURE_PYTHON=1 to force the fallback
(useful for the kernel benchmark and debugging).
"""

import os

_force_py = os.environ.get("HOLOMED_PURE_PYTHON", "") not in ("", "0")

if _force_py:
    from holomed.depth_gesture import _kernels_py as _impl

    BACKEND = "python"
else:
    try:
        from holomed.depth_gesture import _kernels_cy as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        from holomed.depth_gesture import _kernels_py as _impl

        BACKEND = "python"

median_filter3 = _impl.median_filter3
largest_component = _impl.largest_component
trace_contour = _impl.trace_contour

__all__ = ["BACKEND", "median_filter3", "largest_component", "trace_contour"]
