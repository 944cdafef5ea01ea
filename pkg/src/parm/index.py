"""Match index: for every frequent pattern, which sources reach which targets.

An entry ``(v, p, T)`` says that vertex ``v`` matches pattern ``p`` and
that ``T`` is the set of vertices where a matching walk from ``v`` can end.
Entries are stored per pattern as a pair list ``(src, tgt)`` sorted by
source then target, split into one list per worker partition.  Partitions
own disjoint source vertices, so workers append to their own slot without
locks.  Length-0 patterns store ``(v, v)``.

Extending a pattern by ``<l, A>`` only needs the stored targets:
``T' = {w : (u, l, w) in E, u in T, A <= attrs(w)}``, and ``v`` survives iff
``T'`` is non-empty.
"""
from __future__ import annotations

from collections.abc import Iterable

import numpy as np

from . import kernels
from .graph import PropertyGraph
from .patterns import PathPattern

__all__ = ["MatchIndex", "UnknownPatternError", "extend_from_index", "step_pairs", "filter_targets"]

_EMPTY = np.zeros(0, dtype=np.int64)


class UnknownPatternError(KeyError):
    pass


class MatchIndex:
    def __init__(self, g: PropertyGraph, parts: list[np.ndarray]):
        self.graph = g
        self.parts = [np.asarray(p, dtype=np.int64) for p in parts]
        self.patterns: list[PathPattern] = []
        self._ids: dict[PathPattern, int] = {}
        self._pairs: list[list[tuple[np.ndarray, np.ndarray]]] = []
        self._sources: list[np.ndarray] = []
        # (dominating id, dominated id) pairs among indexed patterns
        self.dominance: set[tuple[int, int]] = set()

    @property
    def n_parts(self) -> int:
        return len(self.parts)

    def __len__(self) -> int:
        return len(self.patterns)

    def __contains__(self, p: PathPattern) -> bool:
        return p in self._ids

    def id_of(self, p: PathPattern) -> int:
        try:
            return self._ids[p]
        except KeyError:
            raise UnknownPatternError(p) from None

    def _check(self, pid: int) -> int:
        if not 0 <= pid < len(self.patterns):
            raise UnknownPatternError(pid)
        return pid

    def add(self, p: PathPattern, pairs: list[tuple[np.ndarray, np.ndarray]],
            sources: np.ndarray | None = None) -> int:
        """Store the per-partition pair lists of ``p`` and return its id.

        Passing the already merged ``sources`` stores only those: the pattern
        can then be counted but not extended.
        """
        if p in self._ids:
            raise ValueError("pattern already indexed")
        if len(pairs) != self.n_parts:
            raise ValueError("need one pair list per partition")
        pid = len(self.patterns)
        self.patterns.append(p)
        self._ids[p] = pid
        if sources is None:
            self._pairs.append(pairs)
            self._sources.append(merge_sources(pairs))
        else:
            self._pairs.append([(_EMPTY, _EMPTY)] * self.n_parts)
            self._sources.append(sources)
        return pid

    def add_attrset(self, attrs: Iterable[int], mask: np.ndarray | None = None) -> int:
        """Index a length-0 pattern; ``mask`` optionally limits its sources."""
        p = PathPattern.attrset(attrs)
        m = self.graph.attr_mask(p.attrs[0])
        if mask is not None:
            m = m & mask
        pairs = []
        for part in self.parts:
            v = part[m[part]]
            pairs.append((v, v))
        return self.add(p, pairs)

    def pairs(self, pid: int, part: int | None = None) -> tuple[np.ndarray, np.ndarray]:
        self._check(pid)
        if part is not None:
            return self._pairs[pid][part]
        chunks = self._pairs[pid]
        src = np.concatenate([c[0] for c in chunks]) if chunks else _EMPTY
        tgt = np.concatenate([c[1] for c in chunks]) if chunks else _EMPTY
        order = np.argsort(src, kind="stable")
        return src[order], tgt[order]

    def sources(self, pid: int) -> np.ndarray:
        """Sorted vertices matching pattern ``pid``."""
        return self._sources[self._check(pid)]

    def part_sources(self, pid: int, part: int) -> np.ndarray:
        return np.unique(self._pairs[self._check(pid)][part][0])

    def support(self, pid: int) -> int:
        return int(self.sources(pid).shape[0])

    def targets(self, v: int, pid: int) -> np.ndarray:
        """The target set T of entry (v, pid, T); empty if v does not match."""
        src, tgt = self.pairs(pid)
        lo, hi = np.searchsorted(src, [v, v + 1])
        return tgt[lo:hi]

    def entries(self, v: int) -> list[tuple[PathPattern, np.ndarray]]:
        """All ``(pattern, targets)`` entries of vertex ``v``."""
        out = []
        for pid, p in enumerate(self.patterns):
            t = self.targets(v, pid)
            if t.shape[0]:
                out.append((p, t))
        return out

    def drop_pairs(self, pid: int) -> None:
        """Free the target lists of a pattern no longer needed for extension."""
        self._pairs[self._check(pid)] = [(_EMPTY, _EMPTY)] * self.n_parts


def merge_sources(pairs: list[tuple[np.ndarray, np.ndarray]]) -> np.ndarray:
    chunks = []
    for src, _ in pairs:
        if src.shape[0]:
            keep = np.ones(src.shape[0], dtype=np.bool_)
            keep[1:] = src[1:] != src[:-1]
            chunks.append(src[keep])
    if not chunks:
        return _EMPTY
    return np.sort(np.concatenate(chunks))


def extend_from_index(idx: MatchIndex, pid: int, label: int, attrs: Iterable[int],
                      part: int | None = None, keep: np.ndarray | None = None
                      ) -> tuple[np.ndarray, np.ndarray]:
    """New pair list for pattern ``pid`` extended by ``<label, attrs>``.

    ``part`` restricts the work to one partition; ``keep`` may pass a
    precomputed attribute mask for ``attrs``.
    """
    g = idx.graph
    if keep is None:
        keep = g.attr_mask(list(attrs))
    psrc, ptgt = idx.pairs(pid, part)
    lsrc, ldst = g.label_edges(label)
    return kernels.extend_pairs(psrc, ptgt, lsrc, ldst, keep, g.n_vertices)


def step_pairs(idx: MatchIndex, pid: int, label: int, part: int | None = None
               ) -> tuple[np.ndarray, np.ndarray]:
    """Pattern ``pid`` extended by one ``label`` edge with no attribute test.

    Every extension ``<label, A>`` of ``pid`` is this pair list filtered by
    :func:`filter_targets`, so siblings sharing a prefix and label can reuse it.
    """
    g = idx.graph
    psrc, ptgt = idx.pairs(pid, part)
    lsrc, ldst = g.label_edges(label)
    return kernels.extend_pairs(psrc, ptgt, lsrc, ldst, _all_true(g.n_vertices), g.n_vertices)


def filter_targets(pairs: tuple[np.ndarray, np.ndarray], keep: np.ndarray
                   ) -> tuple[np.ndarray, np.ndarray]:
    """Keep the pairs whose target lies in ``keep``; order is preserved."""
    src, tgt = pairs
    hit = keep[tgt]
    return src[hit], tgt[hit]


_TRUE_CACHE: dict[int, np.ndarray] = {}


def _all_true(n: int) -> np.ndarray:
    m = _TRUE_CACHE.get(n)
    if m is None:
        m = np.ones(n, dtype=np.bool_)
        m.flags.writeable = False
        _TRUE_CACHE.clear()
        _TRUE_CACHE[n] = m
    return m
