"""Vertex pruning, cost estimation and balanced partitioning for the workers.

A vertex that holds no target attribute and has no out-edge with a target
label cannot take part in any frequent pattern as a source, an inner vertex
or an end point, so it is dropped before partitioning.  The remaining
vertices are spread over ``N`` logical partitions by a greedy
largest-cost-first rule with a per-partition cap of ``ceil(n / N)`` vertices.

Logical partitions and OS threads are decoupled: results depend only on the
partitioning (and are merged in partition order), while the number of OS
threads only changes wall-clock time.
"""
from __future__ import annotations

import heapq
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .graph import PropertyGraph

__all__ = [
    "prune_irrelevant",
    "estimate_cost",
    "Partition",
    "partition",
    "WorkerPool",
]


def _as_mask(ids, size) -> np.ndarray:
    ids = np.asarray(ids)
    if ids.dtype == np.bool_:
        if ids.shape[0] != size:
            raise ValueError("mask has the wrong length")
        return ids
    m = np.zeros(size, dtype=np.bool_)
    m[ids.astype(np.int64)] = True
    return m


def _per_vertex_counts(g: PropertyGraph, target_attrs, target_labels):
    amask = _as_mask(target_attrs, g.n_attrs)
    lmask = _as_mask(target_labels, g.n_labels)
    owner = np.repeat(np.arange(g.n_vertices), np.diff(g.attr_ptr))
    n_attr = np.bincount(owner[amask[g.attr_ids]], minlength=g.n_vertices)
    n_out = np.bincount(g.src[lmask[g.lbl]], minlength=g.n_vertices)
    return n_attr, n_out


def prune_irrelevant(g: PropertyGraph, target_attrs, target_labels) -> np.ndarray:
    """Sorted vertices that keep at least one target attribute or target-labelled out-edge.

    ``target_attrs`` / ``target_labels`` are id arrays or boolean masks.
    """
    n_attr, n_out = _per_vertex_counts(g, target_attrs, target_labels)
    return np.flatnonzero((n_attr > 0) | (n_out > 0)).astype(np.int64)


def estimate_cost(g: PropertyGraph, target_attrs, target_labels,
                  vertices: np.ndarray | None = None) -> np.ndarray:
    """Cost ``d_T(v) * |A_T(v)|``: target out-degree times target attribute count."""
    n_attr, n_out = _per_vertex_counts(g, target_attrs, target_labels)
    cost = (n_out * n_attr).astype(np.int64)
    return cost if vertices is None else cost[vertices]


@dataclass
class Partition:
    vertices: np.ndarray      # the vertices that were assigned
    assignment: np.ndarray    # partition id of each entry in ``vertices``
    loads: np.ndarray         # summed cost per partition
    counts: np.ndarray        # vertices per partition

    @property
    def n_parts(self) -> int:
        return int(self.loads.shape[0])

    def parts(self) -> list[np.ndarray]:
        return [np.sort(self.vertices[self.assignment == i]) for i in range(self.n_parts)]

    def groups(self, n_workers: int) -> list[np.ndarray]:
        """Vertices per worker when partition ``i`` runs on worker ``i % n_workers``.

        With fewer cores than partitions each worker owns several partitions
        and walks them as one vertex set, so a single core pays no
        per-partition overhead.
        """
        w = max(1, min(int(n_workers), self.n_parts))
        return [np.sort(self.vertices[self.assignment % w == j]) for j in range(w)]


def partition(vertices, costs, n_parts: int) -> Partition:
    """Greedy balanced split.

    Vertices are taken by decreasing cost (ties by increasing id) and each
    goes to the partition with the smallest load so far (ties by lowest
    partition id) among those below the cap ``ceil(n / n_parts)``.
    """
    if n_parts < 1:
        raise ValueError("n_parts must be >= 1")
    vertices = np.asarray(vertices, dtype=np.int64)
    costs = np.asarray(costs, dtype=np.int64)
    if vertices.shape != costs.shape:
        raise ValueError("vertices and costs must align")
    n = vertices.shape[0]
    cap = max(1, math.ceil(n / n_parts))
    order = np.lexsort((vertices, -costs))
    loads = [0] * n_parts
    counts = [0] * n_parts
    assignment = np.empty(n, dtype=np.int64)
    heap = [(0, t) for t in range(n_parts)]
    for pos, c in zip(order.tolist(), costs[order].tolist()):
        load, t = heapq.heappop(heap)
        assignment[pos] = t
        loads[t] = load + c
        counts[t] += 1
        if counts[t] < cap:
            heapq.heappush(heap, (loads[t], t))
    return Partition(vertices, assignment, np.array(loads, dtype=np.int64),
                     np.array(counts, dtype=np.int64))


class WorkerPool:
    """Runs one task per partition; results come back in partition order."""

    def __init__(self, threads: int):
        self.threads = max(1, int(threads))
        self._ex = ThreadPoolExecutor(self.threads) if self.threads > 1 else None

    def map(self, fn, items):
        items = list(items)
        if self._ex is None or len(items) <= 1:
            return [fn(x) for x in items]
        return list(self._ex.map(fn, items))

    def close(self):
        if self._ex is not None:
            self._ex.shutdown()
            self._ex = None

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()
        return False
