"""Numpy fallback with the same op encoding as the compiled kernel."""
from __future__ import annotations

from functools import lru_cache

import numpy as np


@lru_cache(maxsize=4096)
def _pairs(dim: int, target: int, cmask: int, cval: int) -> tuple[np.ndarray, np.ndarray]:
    b = np.arange(dim, dtype=np.int64)
    tbit = 1 << target
    lo = b[((b & tbit) == 0) & ((b & cmask) == cval)]
    return lo, lo | tbit


def run_program(state, kinds, targets, cmasks, cvals, mats) -> None:
    dim = state.shape[0]
    for kind, t, cm, cv, m in zip(kinds, targets, cmasks, cvals, mats):
        lo, hi = _pairs(dim, int(t), int(cm), int(cv))
        a0 = state[lo]
        a1 = state[hi]
        if kind == 0:
            state[lo] = a1
            state[hi] = a0
        elif kind == 1:
            state[lo] = m[0] * a0
            state[hi] = m[3] * a1
        else:
            state[lo] = m[0] * a0 + m[1] * a1
            state[hi] = m[2] * a0 + m[3] * a1
