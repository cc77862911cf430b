"""Kernel selection: compiled Cython core if importable, numpy otherwise.

Set ``LAPQBE_BACKEND=python`` to force the fallback.
"""
from __future__ import annotations

import os

from . import _pykernels

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

KERNELS = {"python": _pykernels.run_program}
if _compiled is not None:
    KERNELS["cython"] = _compiled.run_program

_forced = os.environ.get("LAPQBE_BACKEND", "").strip().lower()
if _forced and _forced not in KERNELS:
    raise ImportError(f"LAPQBE_BACKEND={_forced!r} not available; have {sorted(KERNELS)}")
DEFAULT = _forced or ("cython" if "cython" in KERNELS else "python")


def available() -> list[str]:
    return sorted(KERNELS)


def get(name: str | None = None):
    name = DEFAULT if name is None else name
    try:
        return KERNELS[name]
    except KeyError:
        raise ValueError(f"unknown backend {name!r}; available: {available()}") from None
