"""Approximate mining: candidate reduction and stratified vertex sampling.

*Candidate reduction* replaces the suffix bound ``|E(A, l)| * d_m**(i-1)``
with ``|E(A, l)| * d_m**(psi * (i-1))``.  For ``psi < 1`` the bound is
smaller, so more candidates are dropped; this can only lose results.

*Vertex sampling* groups the vertices holding at least one frequent
attribute into strata by their exact attribute set, keeps
``ceil(rho * |stratum|)`` vertices from each stratum, and only starts walks
from kept vertices.  A pattern's support is estimated by weighting every
matched sample vertex by ``|stratum| / kept``.  This is the plain
``|V_s(p)| / rho`` estimate whenever ``rho * |stratum|`` is an integer, and
stays unbiased when the ceiling rounds up.

Interval: with ``N`` vertices in the strata whose attribute set contains
the pattern's source set, ``n`` of them sampled and ``x`` matched,
``x_bar = x / n`` and ``s**2 = sum((x_i - x_bar)**2) / (n - 1)``; the
interval is ``estimate +- z * N * s / sqrt(n)``.  For ``n <= 1`` the
variance is undefined and the interval collapses to the estimate.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .baseline import mine_frequent_attribute_sets
from .config import ConfigError, MiningConfig
from .graph import GraphIndexes, PropertyGraph
from .patterns import PathPattern, match_mask
from .results import FrequentSets

__all__ = [
    "cr_suffix_bound",
    "stratify",
    "sample",
    "VertexSample",
    "SampleEstimate",
    "estimate_support",
    "mine_pioneer_approx",
]


def cr_suffix_bound(g_idx: GraphIndexes, attrs, label: int, i: int, psi: float) -> float:
    """Relaxed suffix bound ``|E(A, l)| * d_m**(psi * (i-1))``, capped at |V|."""
    if not 0 <= psi <= 1:
        raise ConfigError(f"psi must be in [0, 1], got {psi}")
    if i < 1:
        raise ValueError("length must be >= 1")
    e = g_idx.edge_set_size(attrs, label)
    if e == 0:
        return 0
    if psi == 1:
        value = e * g_idx.d_m ** (i - 1)
    else:
        value = e * float(g_idx.d_m) ** (psi * (i - 1))
    return min(value, g_idx.graph.n_vertices)


def stratify(g: PropertyGraph, frequent_attrs) -> dict[tuple[int, ...], np.ndarray]:
    """Group vertices by exact attribute set, dropping those with no frequent attribute."""
    freq = np.zeros(g.n_attrs, dtype=np.bool_)
    freq[np.asarray(sorted(frequent_attrs), dtype=np.int64)] = True
    groups: dict[tuple[int, ...], list[int]] = {}
    for v in range(g.n_vertices):
        a = g.attrs(v)
        if a.shape[0] and freq[a].any():
            groups.setdefault(tuple(a.tolist()), []).append(v)
    return {k: np.array(vs, dtype=np.int64) for k, vs in sorted(groups.items())}


@dataclass
class VertexSample:
    strata: dict[tuple[int, ...], np.ndarray]
    kept: dict[tuple[int, ...], np.ndarray]
    rho: float
    seed: int
    n_vertices: int

    def __post_init__(self):
        n = self.n_vertices
        self.mask = np.zeros(n, dtype=np.bool_)
        self.in_strata = np.zeros(n, dtype=np.bool_)
        self.class_of = np.full(n, -1, dtype=np.int64)
        ratios = sorted({Fraction(len(self.strata[h]), len(self.kept[h])) for h in self.strata})
        cls = {r: i for i, r in enumerate(ratios)}
        self.class_weights = [float(r) for r in ratios]
        for h, members in self.strata.items():
            self.in_strata[members] = True
            kept = self.kept[h]
            self.mask[kept] = True
            self.class_of[kept] = cls[Fraction(len(members), len(kept))]

    @property
    def vertices(self) -> np.ndarray:
        return np.flatnonzero(self.mask).astype(np.int64)

    def __len__(self) -> int:
        return int(self.mask.sum())

    def weighted_count(self, class_counts) -> float:
        """Sum of per-class counts times class weights, in class order."""
        total = 0.0
        for c, w in zip(class_counts, self.class_weights):
            if c:
                total += int(c) * w
        return total

    def related(self, attrs) -> tuple[int, int, tuple[tuple[int, int], ...]]:
        """(population, sample size, per-stratum sizes) over strata that contain ``attrs``."""
        want = set(attrs)
        sizes = tuple((len(self.strata[h]), len(self.kept[h]))
                      for h in self.strata if want <= set(h))
        return sum(s[0] for s in sizes), sum(s[1] for s in sizes), sizes


def sample(strata: dict[tuple[int, ...], np.ndarray], rho: float, seed: int,
           n_vertices: int | None = None) -> VertexSample:
    """Keep ``ceil(rho * |stratum|)`` vertices of each stratum, uniformly without replacement."""
    if not 0 < rho <= 1:
        raise ConfigError(f"rho must be in (0, 1], got {rho}")
    rng = np.random.default_rng(seed)
    kept = {}
    for h in sorted(strata):
        members = strata[h]
        m = math.ceil(Fraction(str(rho)) * len(members))
        kept[h] = np.sort(rng.choice(members, size=m, replace=False)) if m < len(members) else members
    if n_vertices is None:
        n_vertices = 1 + max((int(s.max()) for s in strata.values() if len(s)), default=-1)
    return VertexSample(dict(strata), kept, rho, seed, n_vertices)


@dataclass(frozen=True)
class SampleEstimate:
    estimate: float
    variance: float | None
    ci_low: float
    ci_high: float
    z: float
    rho: float
    matched: int
    sample_size: int
    population: int
    stratum_sizes: tuple = ()


def _interval(estimate, matched, n, population, z):
    if n <= 1:
        return None, estimate, estimate
    var = matched * (n - matched) / (n * (n - 1))
    half = z * population * math.sqrt(var / n)
    return var, estimate - half, estimate + half


def _make_estimate(estimate, matched, related, rho, z) -> SampleEstimate:
    population, n, sizes = related
    var, lo, hi = _interval(estimate, matched, n, population, z)
    return SampleEstimate(estimate, var, lo, hi, z, rho, matched, n, population, sizes)


def estimate_support(g: PropertyGraph, vs: VertexSample, p: PathPattern, z: float = 1.96,
                     max_hops: int | None = None) -> SampleEstimate:
    """Estimate |V(p)| from the sampled vertices."""
    related = vs.related(p.attrs[0])
    if related[1] == 0:
        raise ValueError("no sampled vertex can match this pattern's source set")
    hit = match_mask(g, p, max_hops) & vs.mask
    counts = np.bincount(vs.class_of[hit], minlength=len(vs.class_weights))
    est = vs.weighted_count(counts)
    return _make_estimate(est, int(hit.sum()), related, vs.rho, z)


class _SampledCounter:
    """Support estimates for the miner, computed per weight class."""

    approximate = True

    def __init__(self, vs: VertexSample, z: float):
        self.vs = vs
        self.z = z
        self.vertex_mask = vs.mask
        self.class_of = vs.class_of
        self.class_weights = vs.class_weights
        self._related: dict[tuple[int, ...], tuple] = {}

    def _rel(self, attrs):
        key = tuple(sorted(set(attrs)))
        r = self._related.get(key)
        if r is None:
            r = self._related[key] = self.vs.related(key)
        return r

    def support(self, sources: np.ndarray) -> float:
        counts = np.bincount(self.class_of[sources], minlength=len(self.class_weights))
        return self.vs.weighted_count(counts)

    def combine(self, class_counts) -> float:
        return self.vs.weighted_count(class_counts)

    def combine_many(self, class_counts: np.ndarray) -> np.ndarray:
        """Row-wise :meth:`VertexSample.weighted_count`, adding classes in the same order."""
        total = np.zeros(class_counts.shape[0], dtype=np.float64)
        for c, w in enumerate(self.class_weights):
            total += class_counts[:, c] * w
        return total

    def pattern_estimate(self, p: PathPattern, sources: np.ndarray) -> SampleEstimate:
        return _make_estimate(self.support(sources), int(sources.shape[0]),
                              self._rel(p.attrs[0]), self.vs.rho, self.z)

    def pair_estimate(self, x: PathPattern, y: PathPattern, value: float, matched: int) -> SampleEstimate:
        return _make_estimate(value, matched, self._rel(x.attrs[0] + y.attrs[0]), self.vs.rho, self.z)


def mine_pioneer_approx(g: PropertyGraph, config: MiningConfig) -> FrequentSets:
    """The optimised miner with candidate reduction (``psi``) and/or sampling (``rho``)."""
    from .pioneer import _Miner

    counter = None
    if config.rho < 1:
        theta = config.effective_theta(g.n_vertices)
        singles = [a[0] for a in mine_frequent_attribute_sets(g, theta) if len(a) == 1]
        vs = sample(stratify(g, singles), config.rho, config.seed, g.n_vertices)
        counter = _SampledCounter(vs, config.z)
    name = "pioneer-approx" if config.approximate else "pioneer"
    fs = _Miner(g, config, name, counter).run()
    if counter is not None:
        fs.report.extra["sample_size"] = len(counter.vs)
        fs.report.extra["strata"] = len(counter.vs.strata)
    return fs
