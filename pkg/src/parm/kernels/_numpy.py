"""Pure-numpy implementations of the hot kernels.

Every function here has a twin in ``_numba`` with the same signature and
the same output (including ordering), so the two can be swapped freely.
"""
from __future__ import annotations

import numpy as np

_EMPTY = np.zeros(0, dtype=np.int64)


def backprop(src, dst, target_mask, n_vertices):
    """Mark every ``src[e]`` whose edge lands in ``target_mask``."""
    out = np.zeros(n_vertices, dtype=np.bool_)
    if src.shape[0]:
        out[src[target_mask[dst]]] = True
    return out


def extend_pairs(psrc, ptgt, lsrc, ldst, keep, n_vertices):
    """Follow one edge from every (source, target) pair.

    ``lsrc``/``ldst`` are the edges of a single label sorted by source.
    Returns the unique ``(source, new_target)`` pairs with ``keep[new_target]``,
    sorted by source then target.
    """
    if psrc.shape[0] == 0 or lsrc.shape[0] == 0:
        return _EMPTY.copy(), _EMPTY.copy()
    lo = np.searchsorted(lsrc, ptgt, side="left")
    hi = np.searchsorted(lsrc, ptgt, side="right")
    cnt = hi - lo
    total = int(cnt.sum())
    if total == 0:
        return _EMPTY.copy(), _EMPTY.copy()
    offsets = np.cumsum(cnt) - cnt
    pos = np.repeat(lo - offsets, cnt) + np.arange(total, dtype=np.int64)
    new_t = ldst[pos]
    rep_s = np.repeat(psrc, cnt)
    sel = keep[new_t]
    keys = np.unique(rep_s[sel] * np.int64(n_vertices) + new_t[sel])
    return keys // n_vertices, keys % n_vertices


def reach_pairs(sources, lsrc, ldst, max_hops, n_vertices):
    """Per-source BFS over one label; ``max_hops <= 0`` means unbounded.

    A source only reaches itself through an actual cycle.
    """
    sources = np.unique(np.asarray(sources, dtype=np.int64))
    keep = np.ones(n_vertices, dtype=np.bool_)
    visited = _EMPTY.copy()
    fs, ft = sources, sources
    hop = 0
    n = np.int64(n_vertices)
    while fs.shape[0] and (max_hops <= 0 or hop < max_hops):
        ns, nt = extend_pairs(fs, ft, lsrc, ldst, keep, n_vertices)
        new = np.setdiff1d(ns * n + nt, visited, assume_unique=True)
        visited = np.union1d(visited, new)
        fs, ft = new // n, new % n
        hop += 1
    return visited // n, visited % n


def select_pairs(psrc, ptgt, src_mask, tgt_mask):
    sel = src_mask[psrc] & tgt_mask[ptgt]
    return psrc[sel], ptgt[sel]


def and_popcount(bits, left, right):
    """Popcount of ``bits[left[i]] & bits[right[i]]`` for every i."""
    out = np.zeros(left.shape[0], dtype=np.int64)
    step = max(1, (1 << 22) // max(1, bits.shape[1]))
    for lo in range(0, left.shape[0], step):
        hi = lo + step
        x = bits[left[lo:hi]] & bits[right[lo:hi]]
        out[lo:hi] = np.bitwise_count(x).sum(axis=1, dtype=np.int64)
    return out
