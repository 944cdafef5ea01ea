"""Hot inner loops with a numba path and a pure-numpy fallback.

The backend is picked once from the ``PARM_BACKEND`` environment variable
(``numba`` by default, ``numpy`` to force the fallback).  If numba cannot
be imported the numpy path is used silently.  :func:`set_backend` switches
at runtime, which the test-suite and the benchmark use to compare both.

Conventions shared by both backends: vertex ids are ``int64``; a *pair
list* is two parallel ``int64`` arrays ``(src, tgt)`` sorted by source and
then target; label edge slices ``lsrc``/``ldst`` are sorted by source.
"""
from __future__ import annotations

import os
from contextlib import contextmanager

from . import _numpy

try:
    from . import _numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    _numba = None

_BACKENDS = {"numpy": _numpy}
if _numba is not None:
    _BACKENDS["numba"] = _numba


def _initial() -> str:
    name = os.environ.get("PARM_BACKEND", "numba").strip().lower()
    if name not in ("numba", "numpy"):
        raise ValueError(f"PARM_BACKEND must be 'numba' or 'numpy', got {name!r}")
    return name if name in _BACKENDS else "numpy"


_active_name = _initial()
_active = _BACKENDS[_active_name]


def backend() -> str:
    return _active_name


def available() -> list[str]:
    return sorted(_BACKENDS)


def set_backend(name: str) -> None:
    global _active, _active_name
    if name not in _BACKENDS:
        raise ValueError(f"backend {name!r} unavailable; have {available()}")
    _active_name = name
    _active = _BACKENDS[name]


@contextmanager
def using(name: str):
    prev = _active_name
    set_backend(name)
    try:
        yield
    finally:
        set_backend(prev)


def get(name: str):
    """Return the kernel module for ``name`` (for side-by-side comparison)."""
    return _BACKENDS[name]


def backprop(src, dst, target_mask, n_vertices):
    return _active.backprop(src, dst, target_mask, n_vertices)


def extend_pairs(psrc, ptgt, lsrc, ldst, keep, n_vertices):
    return _active.extend_pairs(psrc, ptgt, lsrc, ldst, keep, n_vertices)


def reach_pairs(sources, lsrc, ldst, max_hops, n_vertices):
    return _active.reach_pairs(sources, lsrc, ldst, max_hops, n_vertices)


def select_pairs(psrc, ptgt, src_mask, tgt_mask):
    return _active.select_pairs(psrc, ptgt, src_mask, tgt_mask)


def and_popcount(bits, left, right):
    return _active.and_popcount(bits, left, right)

