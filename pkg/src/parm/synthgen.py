"""Synthetic property graphs with uniform or exponentially skewed in-degrees."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graph import PropertyGraph

__all__ = ["GenSpec", "GenSpecError", "generate"]

DISTRIBUTIONS = ("uniform", "exponential")


class GenSpecError(ValueError):
    pass


@dataclass(frozen=True)
class GenSpec:
    """Generator parameters.

    ``exponential`` draws each edge target by rank with probability
    proportional to ``exp(-lam * rank / n_vertices)``; ranks map to vertices
    through a seeded permutation.  Sources are always uniform.
    """

    n_vertices: int
    n_edges: int
    distribution: str = "uniform"
    n_labels: int = 1
    n_attrs: int = 1
    avg_attrs: float = 1.0
    seed: int = 0
    lam: float = 5.0

    def __post_init__(self):
        if self.n_vertices < 1:
            raise GenSpecError("n_vertices must be >= 1")
        if self.n_edges < 0:
            raise GenSpecError("n_edges must be >= 0")
        if self.n_labels < 1 or self.n_attrs < 0:
            raise GenSpecError("need n_labels >= 1 and n_attrs >= 0")
        if self.distribution not in DISTRIBUTIONS:
            raise GenSpecError(f"distribution must be one of {DISTRIBUTIONS}")
        if not 0 <= self.avg_attrs <= self.n_attrs:
            raise GenSpecError("avg_attrs must lie in [0, n_attrs]")
        if self.lam <= 0:
            raise GenSpecError("lam must be positive")
        if self.n_edges > self.n_vertices * self.n_vertices * self.n_labels:
            raise GenSpecError(
                f"{self.n_edges} distinct edges do not fit in "
                f"{self.n_vertices}^2 x {self.n_labels} (source, label, target) triples")


def _targets(spec: GenSpec, rng: np.random.Generator, perm: np.ndarray, size: int) -> np.ndarray:
    n = spec.n_vertices
    if spec.distribution == "uniform":
        return rng.integers(0, n, size)
    # inverse CDF of an exponential truncated to [0, n); flooring gives
    # P(rank = r) proportional to exp(-lam * r / n)
    u = rng.random(size)
    x = -(n / spec.lam) * np.log1p(-u * (1.0 - math.exp(-spec.lam)))
    rank = np.minimum(x.astype(np.int64), n - 1)
    return perm[rank]


def _edges(spec: GenSpec, rng: np.random.Generator) -> np.ndarray:
    n, L, m = spec.n_vertices, spec.n_labels, spec.n_edges
    perm = rng.permutation(n)
    keys = np.zeros(0, dtype=np.int64)
    while keys.shape[0] < m:
        need = m - keys.shape[0]
        size = need + need // 8 + 16
        s = rng.integers(0, n, size)
        lab = rng.integers(0, L, size)
        t = _targets(spec, rng, perm, size)
        cand = np.concatenate([keys, (s * L + lab) * n + t])
        _, first = np.unique(cand, return_index=True)
        keys = cand[np.sort(first)][:m]  # keep draw order, drop repeats
    s, rest = np.divmod(keys, L * n)
    lab, t = np.divmod(rest, n)
    return np.stack([s, lab, t], axis=1)


def _attributes(spec: GenSpec, rng: np.random.Generator) -> list[np.ndarray]:
    n, A = spec.n_vertices, spec.n_attrs
    if A == 0:
        return [np.zeros(0, dtype=np.int64)] * n
    counts = np.minimum(rng.poisson(spec.avg_attrs, n), A)
    cmax = int(counts.max()) if n else 0
    if A <= 64:
        picks = np.argsort(rng.random((n, A)), axis=1)[:, :cmax]
    else:
        picks = rng.integers(0, A, (n, cmax))
        pad = -1 - np.arange(cmax)
        while True:
            masked = np.where(np.arange(cmax) < counts[:, None], picks, pad)
            srt = np.sort(masked, axis=1)
            bad = np.flatnonzero((srt[:, 1:] == srt[:, :-1]).any(axis=1)) if cmax > 1 else []
            if len(bad) == 0:
                break
            picks[bad] = rng.integers(0, A, (len(bad), cmax))
    return [np.sort(picks[v, :counts[v]]) for v in range(n)]


def generate(spec: GenSpec) -> PropertyGraph:
    """Build the graph described by ``spec``; identical specs give identical graphs."""
    rng = np.random.default_rng(spec.seed)
    attrs = _attributes(spec, rng)
    edges = _edges(spec, rng)
    return PropertyGraph(spec.n_vertices, attrs, edges, spec.n_labels, spec.n_attrs)
