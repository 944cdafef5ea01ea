"""numba-compiled kernels; output-identical to ``_numpy``.

All kernels are ``nogil`` so partition workers can run them concurrently.
"""
from __future__ import annotations

import numpy as np
from numba import njit

_M1 = np.uint64(0x5555555555555555)
_M2 = np.uint64(0x3333333333333333)
_M4 = np.uint64(0x0F0F0F0F0F0F0F0F)
_H01 = np.uint64(0x0101010101010101)


@njit(cache=True, nogil=True)
def backprop(src, dst, target_mask, n_vertices):
    out = np.zeros(n_vertices, dtype=np.bool_)
    for e in range(src.shape[0]):
        if target_mask[dst[e]]:
            out[src[e]] = True
    return out


@njit(cache=True, nogil=True)
def _grow(a, need):
    if need <= a.shape[0]:
        return a
    cap = max(need, 2 * a.shape[0] + 16)
    b = np.empty(cap, dtype=a.dtype)
    b[: a.shape[0]] = a
    return b


@njit(cache=True, nogil=True)
def extend_pairs(psrc, ptgt, lsrc, ldst, keep, n_vertices):
    m = psrc.shape[0]
    lo = np.empty(m, dtype=np.int64)
    hi = np.empty(m, dtype=np.int64)
    total = 0
    for j in range(m):
        lo[j] = np.searchsorted(lsrc, ptgt[j], side="left")
        hi[j] = np.searchsorted(lsrc, ptgt[j], side="right")
        total += hi[j] - lo[j]
    out_s = np.empty(total, dtype=np.int64)
    out_t = np.empty(total, dtype=np.int64)
    # pairs arrive grouped by source: gather each group's targets, then
    # sort and drop repeats in place (no per-call O(|V|) scratch array)
    k = 0
    j = 0
    while j < m:
        s = psrc[j]
        start = k
        while j < m and psrc[j] == s:
            for e in range(lo[j], hi[j]):
                t = ldst[e]
                if keep[t]:
                    out_t[k] = t
                    k += 1
            j += 1
        if k - start > 1:
            out_t[start:k] = np.sort(out_t[start:k])
            w = start + 1
            for r in range(start + 1, k):
                if out_t[r] != out_t[w - 1]:
                    out_t[w] = out_t[r]
                    w += 1
            k = w
        out_s[start:k] = s
    return out_s[:k].copy(), out_t[:k].copy()


@njit(cache=True, nogil=True)
def reach_pairs(sources, lsrc, ldst, max_hops, n_vertices):
    srcs = np.unique(sources)
    visited = np.full(n_vertices, -1, dtype=np.int64)
    frontier = np.empty(n_vertices, dtype=np.int64)
    nxt = np.empty(n_vertices, dtype=np.int64)
    out_s = np.empty(16, dtype=np.int64)
    out_t = np.empty(16, dtype=np.int64)
    k = 0
    for si in range(srcs.shape[0]):
        s = srcs[si]
        start = k
        frontier[0] = s
        fsize = 1
        hop = 0
        while fsize > 0 and (max_hops <= 0 or hop < max_hops):
            nsize = 0
            for fi in range(fsize):
                f = frontier[fi]
                a = np.searchsorted(lsrc, f, side="left")
                b = np.searchsorted(lsrc, f, side="right")
                for e in range(a, b):
                    t = ldst[e]
                    if visited[t] != si:
                        visited[t] = si
                        nxt[nsize] = t
                        nsize += 1
                        out_s = _grow(out_s, k + 1)
                        out_t = _grow(out_t, k + 1)
                        out_s[k] = s
                        out_t[k] = t
                        k += 1
            frontier, nxt = nxt, frontier
            fsize = nsize
            hop += 1
        out_t[start:k] = np.sort(out_t[start:k])
    return out_s[:k].copy(), out_t[:k].copy()


@njit(cache=True, nogil=True)
def select_pairs(psrc, ptgt, src_mask, tgt_mask):
    m = psrc.shape[0]
    out_s = np.empty(m, dtype=np.int64)
    out_t = np.empty(m, dtype=np.int64)
    k = 0
    for j in range(m):
        if src_mask[psrc[j]] and tgt_mask[ptgt[j]]:
            out_s[k] = psrc[j]
            out_t[k] = ptgt[j]
            k += 1
    return out_s[:k].copy(), out_t[:k].copy()


@njit(cache=True, nogil=True)
def _popcount(x):
    x = x - ((x >> np.uint64(1)) & _M1)
    x = (x & _M2) + ((x >> np.uint64(2)) & _M2)
    x = (x + (x >> np.uint64(4))) & _M4
    return (x * _H01) >> np.uint64(56)


@njit(cache=True, nogil=True)
def and_popcount(bits, left, right):
    out = np.zeros(left.shape[0], dtype=np.int64)
    for i in range(left.shape[0]):
        a = left[i]
        b = right[i]
        acc = 0
        for w in range(bits.shape[1]):
            x = bits[a, w] & bits[b, w]
            if x:
                acc += np.int64(_popcount(x))
        out[i] = acc
    return out
