"""Hot elementwise kernels: numba-jitted with a pure-numpy fallback.

Set the environment variable WIGNERFLOW_NO_NUMBA=1 (before import) to force
the numpy path. Reductions stay in numpy so results are bit-deterministic;
only elementwise work is jitted. benchmarks/bench_kernels.py compares the
two paths.
"""
from __future__ import annotations

import os

import numpy as np

USE_NUMBA = os.environ.get("WIGNERFLOW_NO_NUMBA", "").lower() not in ("1", "true", "yes")
if USE_NUMBA:
    try:
        from numba import njit, prange
    except ImportError:  # pragma: no cover - numba is a hard dependency
        USE_NUMBA = False


def apply_phase_numpy(values: np.ndarray, phase: np.ndarray) -> None:
    """In-place elementwise multiply of a complex field by a phase array."""
    values *= phase


def gaussian_field_numpy(x: np.ndarray, p: np.ndarray, x0: float, p0: float,
                         ax: float, ap: float, amp: float) -> np.ndarray:
    """amp * exp(-ax*(x-x0)^2 - ap*(p-p0)^2) on arbitrary point arrays."""
    return amp * np.exp(-ax * (x - x0) ** 2 - ap * (p - p0) ** 2)


if USE_NUMBA:

    @njit(parallel=True, cache=True)
    def _apply_phase_jit(values, phase):  # pragma: no cover - compiled
        n0, n1 = values.shape
        for i in prange(n0):
            for j in range(n1):
                values[i, j] *= phase[i, j]

    @njit(parallel=True, cache=True)
    def _gaussian_field_jit(x, p, x0, p0, ax, ap, amp):  # pragma: no cover - compiled
        n0, n1 = x.shape
        out = np.empty((n0, n1))
        for i in prange(n0):
            for j in range(n1):
                dx = x[i, j] - x0
                dp = p[i, j] - p0
                out[i, j] = amp * np.exp(-ax * dx * dx - ap * dp * dp)
        return out

    def apply_phase(values, phase):
        _apply_phase_jit(values, phase)

    def gaussian_field(x, p, x0, p0, ax, ap, amp):
        return _gaussian_field_jit(np.ascontiguousarray(x), np.ascontiguousarray(p),
                                   x0, p0, ax, ap, amp)

else:
    apply_phase = apply_phase_numpy
    gaussian_field = gaussian_field_numpy
