"""The optimised miner: degree bounds, vertical/horizontal growth, match index.

Pipeline:

1. frequent attribute sets (Apriori over vertex attributes);
2. per-length target sets from the degree bounds, then vertex pruning and
   partitioning over the workers;
3. simple patterns level by level: *vertical* growth appends a single
   attribute step to each frequent pattern of the previous length,
   *horizontal* growth joins two frequent patterns of the same length and
   labels into one with a single extra attribute, repeated to a fixpoint;
4. reachability patterns from per-label BFS closures, grown horizontally;
5. rules by a level-wise walk over pattern pairs, starting from pairs of
   unit patterns and refining either side by one step.

Every candidate is checked against all of its one-step generalisations and
against the degree bounds before it is evaluated from the match index, so
the result is exactly what the baseline finds.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .baseline import mine_frequent_attribute_sets
from .config import MiningConfig
from .graph import GraphIndexes, PropertyGraph
from .index import MatchIndex, extend_from_index, filter_targets, merge_sources, step_pairs
from .measures import RuleMeasures
from .parallel import WorkerPool, estimate_cost, partition, prune_irrelevant
from .patterns import Kind, PathPattern
from .report import RunReport
from .results import FrequentSets

__all__ = [
    "suffix_bound",
    "prefix_bound",
    "reach_bound",
    "TargetSets",
    "CandidateSets",
    "compute_target_sets",
    "vertical_extend",
    "horizontal_extend",
    "extend_from_index",
    "mine_pioneer",
]

_BATCH = 256
_STEP_CACHE = 16
_BITSET_CHUNK = 256
_EPS = 1e-9


# -- degree bounds -------------------------------------------------------------


def _saturate(value, n_vertices):
    return value if n_vertices is None else min(value, n_vertices)


def suffix_bound(g_idx: GraphIndexes, attrs, label: int, i: int) -> int:
    """Upper bound ``|E(A, l)| * d_m**(i-1)`` on |V(p)| for a length-``i`` p ending in ``<l, A>``.

    Computed with Python integers and capped at |V|.
    """
    if i < 1:
        raise ValueError("length must be >= 1")
    e = g_idx.edge_set_size(attrs, label)
    if e == 0:
        return 0
    return _saturate(e * g_idx.d_m ** (i - 1), g_idx.graph.n_vertices)


def prefix_bound(g_idx: GraphIndexes, attrs, label: int, i: int) -> int:
    """Upper bound ``|V(A, l)| * d_m**(i-1)`` when ``A`` sits at position ``i-1`` followed by ``l``."""
    if i < 1:
        raise ValueError("length must be >= 1")
    v = g_idx.vertex_set_size(attrs, label)
    if v == 0:
        return 0
    return _saturate(v * g_idx.d_m ** (i - 1), g_idx.graph.n_vertices)


def reach_bound(g_idx: GraphIndexes, attrs, label: int, max_hops: int | None) -> int:
    """Upper bound on |V(<A0, l*, A>)| from the edges entering ``A``.

    A source reaching ``A`` within ``h`` hops is found by walking back from
    one of the ``|E(A, l)|`` final edges through at most ``h - 1`` more
    edges, so the bound is ``|E(A, l)| * sum(d_m**j for j < h)``.  Without
    a hop cap only the emptiness test remains.
    """
    e = g_idx.edge_set_size(attrs, label)
    n = g_idx.graph.n_vertices
    if e == 0:
        return 0
    if max_hops is None or max_hops <= 0:
        return n
    d = g_idx.d_m
    return _saturate(e * sum(d ** j for j in range(max_hops)), n)


# -- target sets ---------------------------------------------------------------


@dataclass
class TargetSets:
    """Single attributes and labels that survive the degree bounds.

    ``attrs_by_label[i][l]`` holds the attributes ``a`` whose suffix bound
    at length ``i`` reaches theta; ``labels_by_attr[i][a]`` the labels whose
    prefix bound does.  ``reach_targets[l]`` lists the attributes that may
    end a frequent ``l*`` pattern.  Index 0 of the per-length lists is unused.
    """

    theta: int
    k: int
    attrs_by_label: list[dict[int, tuple[int, ...]]]
    labels_by_attr: list[dict[int, frozenset[int]]]
    reach_targets: dict[int, tuple[int, ...]]

    def reach_labels(self, a: int) -> frozenset[int]:
        return self.labels_by_attr[1].get(a, frozenset())

    def all_attrs(self) -> set[int]:
        out: set[int] = set()
        for level in self.attrs_by_label[1:]:
            for attrs in level.values():
                out.update(attrs)
        for attrs in self.reach_targets.values():
            out.update(attrs)
        return out

    def all_labels(self) -> set[int]:
        out: set[int] = set()
        for level in self.labels_by_attr[1:]:
            for labels in level.values():
                out.update(labels)
        return out


def compute_target_sets(g_idx: GraphIndexes, theta: int, k: int, psi: float = 1.0,
                        max_hops: int | None = None) -> TargetSets:
    """Target sets for lengths ``1..k``.

    ``psi`` < 1 shrinks the exponent of the suffix bound (candidate
    reduction); the prefix bound is never relaxed.  ``max_hops`` is the
    reachability hop cap (``None`` or ``<= 0`` for unbounded).
    """
    from .approx import cr_suffix_bound

    attrs_by_label: list[dict[int, tuple[int, ...]]] = [{}]
    labels_by_attr: list[dict[int, frozenset[int]]] = [{}]
    e_nz = list(zip(*np.nonzero(g_idx.edge_counts)))
    v_nz = list(zip(*np.nonzero(g_idx.vertex_counts)))
    for i in range(1, k + 1):
        abl: dict[int, list[int]] = defaultdict(list)
        for a, lab in e_nz:
            a, lab = int(a), int(lab)
            if psi >= 1:
                b = suffix_bound(g_idx, (a,), lab, i)
            else:
                b = cr_suffix_bound(g_idx, (a,), lab, i, psi)
            if b >= theta:
                abl[lab].append(a)
        lba: dict[int, set[int]] = defaultdict(set)
        for a, lab in v_nz:
            a, lab = int(a), int(lab)
            if prefix_bound(g_idx, (a,), lab, i) >= theta:
                lba[a].add(lab)
        attrs_by_label.append({lab: tuple(sorted(v)) for lab, v in sorted(abl.items())})
        labels_by_attr.append({a: frozenset(v) for a, v in sorted(lba.items())})
    reach: dict[int, list[int]] = defaultdict(list)
    for a, lab in e_nz:
        a, lab = int(a), int(lab)
        if reach_bound(g_idx, (a,), lab, max_hops) >= theta:
            reach[lab].append(a)
    return TargetSets(theta, k, attrs_by_label, labels_by_attr,
                      {lab: tuple(sorted(v)) for lab, v in sorted(reach.items())})


# -- candidate generation ------------------------------------------------------


@dataclass
class CandidateSets:
    """Candidates of the current iteration.

    ``attrsets`` (length-0), ``simple``, ``reach`` and ``rules`` (pattern id
    pairs).  Nothing in here is already known to be infrequent or to
    generalise to an infrequent pattern.
    """

    attrsets: list[tuple[int, ...]] = field(default_factory=list)
    simple: list[PathPattern] = field(default_factory=list)
    reach: list[PathPattern] = field(default_factory=list)
    rules: np.ndarray = field(default_factory=lambda: np.zeros((0, 2), dtype=np.int64))


def vertical_extend(frequent, targets: TargetSets, i: int | None = None) -> list[PathPattern]:
    """Append one single-attribute step ``<l, {a}>`` to every pattern in ``frequent``.

    ``l`` must pass the prefix bound for every attribute of the pattern's
    last set, and ``a`` the suffix bound for ``l`` at length ``i`` (default:
    one more than the input length).
    """
    out = []
    for p in sorted(frequent, key=PathPattern.sort_key):
        n = p.length + 1 if i is None else i
        if n > targets.k:
            continue
        lba = targets.labels_by_attr[n]
        labels = None
        for a in p.attrs[-1]:
            la = lba.get(a, frozenset())
            labels = la if labels is None else (labels & la)
        for lab in sorted(labels or ()):
            for a in targets.attrs_by_label[n].get(lab, ()):
                out.append(p.extend(lab, (a,)))
    return out


def horizontal_extend(frequent_at_level) -> list[PathPattern]:
    """Pairwise joins of patterns that differ in exactly one attribute each.

    Two patterns with ``m`` attributes, the same kind and the same labels
    join when they share ``m - 1`` attributes position by position; the
    result holds their union (``m + 1`` attributes).  Output is sorted and
    free of duplicates.
    """
    buckets: dict[tuple, list[tuple[PathPattern, int, int]]] = defaultdict(list)
    for p in frequent_at_level:
        for j, s in enumerate(p.attrs):
            for x in s:
                core = tuple(t if q != j else tuple(y for y in t if y != x)
                             for q, t in enumerate(p.attrs))
                buckets[(p.kind, p.labels, core)].append((p, j, x))
    out: set[PathPattern] = set()
    for (kind, labels, core), members in buckets.items():
        for u in range(len(members)):
            p1, j1, x1 = members[u]
            for w in range(u + 1, len(members)):
                p2, j2, x2 = members[w]
                if p1 == p2:
                    continue
                sets = list(core)
                sets[j1] = tuple(sorted(sets[j1] + (x1,)))
                sets[j2] = tuple(sorted(sets[j2] + (x2,)))
                out.add(PathPattern._raw(tuple(sets), labels, kind))
    return sorted(out, key=PathPattern.sort_key)


# -- the miner -----------------------------------------------------------------


class _ExactCounter:
    """Supports are plain vertex counts."""

    approximate = False
    vertex_mask = None

    def __init__(self, n_vertices: int):
        self.class_of = np.zeros(n_vertices, dtype=np.int64)
        self.class_weights = [1]

    def support(self, sources: np.ndarray) -> int:
        return int(sources.shape[0])

    def combine(self, class_counts) -> int:
        return int(class_counts[0])

    def combine_many(self, class_counts: np.ndarray) -> np.ndarray:
        return class_counts[:, 0]

    def pattern_estimate(self, p, sources):
        return None

    def pair_estimate(self, x, y, count, matched):
        return None


class _Miner:
    def __init__(self, g: PropertyGraph, config: MiningConfig, algorithm: str = "pioneer",
                 counter=None):
        self.g = g
        self.cfg = config
        self.gi = g.indexes
        self.theta = config.effective_theta(g.n_vertices)
        self.hops = config.max_hops
        self.counter = counter or _ExactCounter(g.n_vertices)
        self.report = RunReport(algorithm, config.as_dict(), g.n_vertices, g.n_edges, self.theta)
        self._masks: dict[tuple[int, ...], np.ndarray] = {}
        self.candidates = CandidateSets()

    # helpers

    def mask(self, attrs) -> np.ndarray:
        key = tuple(attrs)
        m = self._masks.get(key)
        if m is None:
            m = self.g.attr_mask(key)
            self._masks[key] = m
        return m

    def is_frequent(self, value) -> bool:
        return value >= self.theta - _EPS if self.counter.approximate else value >= self.theta

    def _frequent_many(self, values: np.ndarray) -> np.ndarray:
        if self.counter.approximate:
            return values >= self.theta - _EPS
        return values >= self.theta

    def _evaluate(self, cands, pairs_fn):
        """Yield ``(candidate, per-part pairs, merged sources)`` in input order."""
        parts = range(self.idx.n_parts)
        for lo in range(0, len(cands), _BATCH):
            chunk = cands[lo:lo + _BATCH]
            per_part = self.pool.map(lambda part: [pairs_fn(c, part) for c in chunk], parts)
            for ci, c in enumerate(chunk):
                pairs = [per_part[p][ci] for p in parts]
                yield c, pairs, merge_sources(pairs)

    def _admit(self, cands, pairs_fn, stats, found: dict, keep_pairs: bool = True) -> None:
        """Index the frequent candidates; ``keep_pairs=False`` stores sources only."""
        for c, pairs, sources in self._evaluate(cands, pairs_fn):
            value = self.counter.support(sources)
            if self.is_frequent(value):
                stats.frequent += 1
                self.idx.add(c, pairs, sources if not keep_pairs else None)
                found[c] = value
                est = self.counter.pattern_estimate(c, sources)
                if est is not None:
                    self.estimates[c] = est
            else:
                stats.infrequent += 1

    # phases

    def run(self) -> FrequentSets:
        g, cfg, rep = self.g, self.cfg, self.report
        with rep.timed("attrsets") as ph:
            p0 = mine_frequent_attribute_sets(g, self.theta)
            ph.generated = ph.frequent = len(p0)
            self.candidates.attrsets = sorted(p0)
        with rep.timed("targets"):
            self.targets = compute_target_sets(self.gi, self.theta, cfg.k, cfg.psi, self.hops)
        with rep.timed("partition"):
            singles = {a[0] for a in p0 if len(a) == 1}
            t_attrs = np.array(sorted(singles | self.targets.all_attrs()), dtype=np.int64)
            t_labels = np.array(sorted(self.targets.all_labels()), dtype=np.int64)
            kept = prune_irrelevant(g, t_attrs, t_labels)
            if self.counter.vertex_mask is not None:
                kept = kept[self.counter.vertex_mask[kept]]
            costs = estimate_cost(g, t_attrs, t_labels, kept)
            self.partition = partition(kept, costs, cfg.threads)
            rep.extra["pruned_vertices"] = int(g.n_vertices - kept.shape[0])
            rep.extra["partition_loads"] = self.partition.loads.tolist()
            rep.extra["partition_counts"] = self.partition.counts.tolist()
        workers = cfg.worker_threads()
        self.idx = MatchIndex(g, self.partition.groups(workers))
        rep.extra["worker_threads"] = workers
        self.estimates: dict = {}
        self.pool = WorkerPool(workers)
        try:
            prev: dict[PathPattern, int] = {}
            for a in sorted(p0):
                prev[PathPattern.attrset(a)] = self.idx.add_attrset(a, self.counter.vertex_mask)
            simple = []
            for i in range(1, cfg.k + 1):
                level = self._simple_level(i, prev)
                for p in prev:
                    self.idx.drop_pairs(self.idx.id_of(p))
                simple.append(level)
                prev = {p: self.idx.id_of(p) for p in level}
                if not level:
                    simple.extend({} for _ in range(i, cfg.k))
                    break
            for p in prev:
                self.idx.drop_pairs(self.idx.id_of(p))
            reach = self._reach(p0)
            fs = FrequentSets(g.n_vertices, self.theta, cfg.k,
                              attrsets={PathPattern.attrset(a): c for a, c in p0.items()},
                              simple=simple, reach=reach, report=rep)
            fs.estimates = self.estimates
            fs.rules, fs.rule_estimates = self._rules(fs.patterns())
        finally:
            self.pool.close()
        rep.rule_count = len(fs.rules)
        rep.pattern_count = len(fs.patterns())
        rep.extra["dominance_pairs"] = len(self.idx.dominance)
        rep.finish()
        return fs

    def _simple_level(self, i: int, prev: dict[PathPattern, int]) -> dict:
        g, gi, theta = self.g, self.gi, self.theta
        found: dict[PathPattern, int | float] = {}
        with self.report.timed(f"simple-{i}") as stats:
            # candidates arrive grouped by (prefix, label); each partition
            # keeps its last few unfiltered steps and filters them per candidate
            steps: list[dict] = [{} for _ in range(self.idx.n_parts)]

            def extend(c: PathPattern, part: int):
                key = (prev[c.prefix(i - 1)], c.labels[-1])
                cache = steps[part]
                base = cache.get(key)
                if base is None:
                    if len(cache) >= _STEP_CACHE:
                        del cache[next(iter(cache))]
                    base = cache[key] = step_pairs(self.idx, key[0], key[1], part)
                return filter_targets(base, self.mask(c.attrs[-1]))

            cands = vertical_extend(prev, self.targets, i)
            self.candidates.simple = cands
            stats.generated += len(cands)
            self._admit(cands, extend, stats, found, i < self.cfg.k)
            seen = set(cands)
            bound_ok: dict[tuple, bool] = {}

            def bounds_pass(c: PathPattern) -> bool:
                key = (c.attrs, c.labels)
                ok = bound_ok.get(key)
                if ok is None:
                    ok = suffix_bound(gi, c.attrs[-1], c.labels[-1], i) >= theta and all(
                        prefix_bound(gi, c.attrs[j], c.labels[j], j + 1) >= theta
                        for j in range(i))
                    bound_ok[key] = ok
                return ok

            by_size: dict[int, list[PathPattern]] = defaultdict(list)
            for p in found:
                by_size[p.n_attrs].append(p)
            m = min(by_size, default=None)
            while m is not None:
                joined = [c for c in horizontal_extend(by_size.get(m, ())) if c not in seen]
                seen.update(joined)
                stats.generated += len(joined)
                keep = []
                for c in joined:
                    if c.prefix(i - 1) not in prev or any(
                            r not in found for r in c.reductions() if r.length == i):
                        stats.pruned_prefix += 1
                    elif not bounds_pass(c):
                        stats.pruned_bound += 1
                    else:
                        keep.append(c)
                keep.sort(key=lambda c: (prev[c.prefix(i - 1)], c.labels[-1]))
                self.candidates.simple = keep
                new: dict = {}
                self._admit(keep, extend, stats, new, i < self.cfg.k)
                found.update(new)
                for p in new:
                    by_size[p.n_attrs].append(p)
                larger = [s for s in by_size if s > m]
                m = min(larger, default=None)
        return found

    def _reach(self, p0) -> dict:
        g, gi, theta, hops = self.g, self.gi, self.theta, self.hops
        found: dict[PathPattern, int | float] = {}
        singles = sorted(a[0] for a in p0 if len(a) == 1)
        with self.report.timed("reach") as stats:
            for lab in range(g.n_labels):
                a0s = [a for a in singles if lab in self.targets.reach_labels(a)]
                a1s = self.targets.reach_targets.get(lab, ())
                if not a0s or not a1s:
                    continue
                lsrc, ldst = g.label_edges(lab)
                src_mask = np.zeros(g.n_vertices, dtype=np.bool_)
                for a in a0s:
                    src_mask |= self.mask((a,))

                def closure(part: int):
                    verts = self.idx.parts[part]
                    return kernels.reach_pairs(verts[src_mask[verts]], lsrc, ldst,
                                               0 if hops is None else hops, g.n_vertices)

                closures = self.pool.map(closure, range(self.idx.n_parts))

                by_source: list[dict] = [{} for _ in range(self.idx.n_parts)]

                def select(c: PathPattern, part: int):
                    cache = by_source[part]
                    base = cache.get(c.attrs[0])
                    if base is None:
                        if len(cache) >= _STEP_CACHE:
                            del cache[next(iter(cache))]
                        ps, pt = closures[part]
                        hit = self.mask(c.attrs[0])[ps]
                        base = cache[c.attrs[0]] = (ps[hit], pt[hit])
                    return filter_targets(base, self.mask(c.attrs[1]))

                cands = [PathPattern.reach((a0,), lab, (a1,)) for a0 in a0s for a1 in a1s]
                self.candidates.reach = cands
                stats.generated += len(cands)
                level: dict = {}
                self._admit(cands, select, stats, level, False)
                seen = set(cands)
                frontier = list(level)
                while frontier:
                    joined = [c for c in horizontal_extend(frontier) if c not in seen]
                    seen.update(joined)
                    stats.generated += len(joined)
                    keep = []
                    for c in joined:
                        if c.attrs[0] not in p0 or any(r not in level for r in c.reductions()):
                            stats.pruned_prefix += 1
                        elif (gi.vertex_set_size(c.attrs[0], lab) < theta
                              or reach_bound(gi, c.attrs[1], lab, hops) < theta):
                            stats.pruned_bound += 1
                        else:
                            keep.append(c)
                    keep.sort(key=lambda c: c.attrs[0])
                    self.candidates.reach = keep
                    new: dict = {}
                    self._admit(keep, select, stats, new, False)
                    level.update(new)
                    frontier = list(new)
                for p in level:
                    self.idx.drop_pairs(self.idx.id_of(p))
                found.update(level)
        return found

    def _rules(self, patterns: dict) -> tuple[dict, dict]:
        g = self.g
        rules: dict = {}
        rule_est: dict = {}
        with self.report.timed("rules") as stats:
            pats = sorted(patterns, key=PathPattern.sort_key)
            P = len(pats)
            if P == 0:
                return rules, rule_est
            rid = {p: i for i, p in enumerate(pats)}
            pid = [self.idx.id_of(p) for p in pats]

            # one-step refinements (children) and everything each pattern dominates
            children: list[list[int]] = [[] for _ in range(P)]
            below: list[set[int]] = [set() for _ in range(P)]
            order = sorted(range(P), key=lambda i: (pats[i].n_attrs + pats[i].length, i))
            for i in order:
                below[i].add(i)
                for r in pats[i].reductions():
                    j = rid.get(r)
                    if j is not None:
                        children[j].append(i)
                        below[i] |= below[j]
            dom = []
            for i in range(P):
                for j in below[i]:
                    if j != i:
                        self.idx.dominance.add((pid[i], pid[j]))
                        dom.append(i * P + j)
            dom_keys = np.unique(np.array(dom, dtype=np.int64))
            ch_len = np.array([len(c) for c in children], dtype=np.int64)
            ch_ptr = np.concatenate([[0], np.cumsum(ch_len)])
            ch_idx = np.array([c for cs in children for c in sorted(cs)], dtype=np.int64)

            bits, group_class = self._bitsets(pats)
            supports = [patterns[p] for p in pats]

            seeds = np.array([i for i, p in enumerate(pats) if p.is_unit and
                              (p.is_reach or p.length == 1)], dtype=np.int64)
            a, b = np.triu_indices(seeds.shape[0])
            I, J = seeds[a], seeds[b]
            keys = I * P + J
            seen = np.sort(keys)
            while I.shape[0]:
                # identical or dominating pairs are frequent without counting
                trivial = (I == J) | np.isin(I * P + J, dom_keys) | np.isin(J * P + I, dom_keys)
                TI, TJ = I[~trivial], J[~trivial]
                class_counts = self._pair_counts(bits, group_class, TI, TJ)
                values = self.counter.combine_many(class_counts)
                freq_nt = self._frequent_many(values)
                stats.generated += int(TI.shape[0])
                stats.frequent += int(freq_nt.sum())
                stats.infrequent += int((~freq_nt).sum())
                self.candidates.rules = np.stack([TI, TJ], axis=1)
                hits = np.flatnonzero(freq_nt)
                n_v = g.n_vertices
                for x, y, v in zip(TI[hits].tolist(), TJ[hits].tolist(), values[hits].tolist()):
                    px, py = pats[x], pats[y]
                    sx, sy = supports[x], supports[y]
                    rules[(px, py)] = RuleMeasures(v, sx, sy, n_v)
                    rules[(py, px)] = RuleMeasures(v, sy, sx, n_v)
                if self.counter.approximate:
                    matched = class_counts[hits].sum(axis=1).tolist()
                    for x, y, v, mt in zip(TI[hits].tolist(), TJ[hits].tolist(),
                                           values[hits].tolist(), matched):
                        px, py = pats[x], pats[y]
                        est = self.counter.pair_estimate(px, py, v, mt)
                        rule_est[(px, py)] = rule_est[(py, px)] = est
                FI = np.concatenate([I[trivial], TI[freq_nt]])
                FJ = np.concatenate([J[trivial], TJ[freq_nt]])
                I, J = _expand(FI, FJ, ch_ptr, ch_idx, P)
                keys = I * P + J
                fresh = ~np.isin(keys, seen, assume_unique=False)
                keys = keys[fresh]
                I, J = I[fresh], J[fresh]
                seen = np.union1d(seen, keys)
        return rules, rule_est

    def _bitsets(self, pats):
        """Per (partition, weight class) bit matrices of pattern sources.

        Counting per weight class keeps every partial sum an integer, so
        the final totals do not depend on how vertices were partitioned.
        """
        g = self.g
        n_cls = len(self.counter.class_weights)
        parts = self.idx.parts
        group = np.full(g.n_vertices, -1, dtype=np.int64)
        local = np.zeros(g.n_vertices, dtype=np.int64)
        sizes = []
        for pi, verts in enumerate(parts):
            cls = self.counter.class_of[verts]
            for c in range(n_cls):
                members = verts[cls == c]
                group[members] = pi * n_cls + c
                local[members] = np.arange(members.shape[0])
                sizes.append(members.shape[0])
        P = len(pats)
        words = [(s + 63) // 64 for s in sizes]
        bits = [np.zeros((P, w), dtype=np.uint64) for w in words]
        # bit p of a row lives in word p >> 6 at position p & 63, which is
        # little-endian packbits viewed as little-endian uint64
        for lo in range(0, P, _BITSET_CHUNK):
            chunk = [self.idx.sources(self.idx.id_of(p)) for p in pats[lo:lo + _BITSET_CHUNK]]
            rows = np.repeat(np.arange(len(chunk), dtype=np.int64), [c.shape[0] for c in chunk])
            verts = np.concatenate(chunk) if chunk else np.zeros(0, np.int64)
            grp = group[verts]
            for gid, w in enumerate(words):
                if w == 0:
                    continue
                sel = grp == gid
                dense = np.zeros((len(chunk), w * 64), dtype=np.bool_)
                dense[rows[sel], local[verts[sel]]] = True
                packed = np.packbits(dense, axis=1, bitorder="little")
                bits[gid][lo:lo + len(chunk)] = packed.view("<u8")
        return bits, n_cls

    def _pair_counts(self, bits, n_cls, I, J) -> np.ndarray:
        """Intersection sizes per weight class, one row per pair."""
        if I.shape[0] == 0:
            return np.zeros((0, n_cls), dtype=np.int64)
        n_parts = self.idx.n_parts

        def count(part: int):
            return [kernels.and_popcount(bits[part * n_cls + c], I, J) for c in range(n_cls)]

        per_part = self.pool.map(count, range(n_parts))
        totals = [sum(per_part[p][c] for p in range(n_parts)) for c in range(n_cls)]
        return np.stack(totals, axis=1)


def _expand(I, J, ch_ptr, ch_idx, P):
    """Refine either side of each pair by one step; return canonical new pairs."""
    out_i, out_j = [], []
    for side, other in ((I, J), (J, I)):
        lens = ch_ptr[side + 1] - ch_ptr[side]
        total = int(lens.sum())
        if total == 0:
            continue
        starts = np.repeat(ch_ptr[side] - (np.cumsum(lens) - lens), lens)
        kids = ch_idx[starts + np.arange(total)]
        partner = np.repeat(other, lens)
        out_i.append(np.minimum(kids, partner))
        out_j.append(np.maximum(kids, partner))
    if not out_i:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty
    keys = np.unique(np.concatenate(out_i) * P + np.concatenate(out_j))
    return keys // P, keys % P


def mine_pioneer(g: PropertyGraph, config: MiningConfig) -> FrequentSets:
    """Mine all frequent patterns and rules; identical to the baseline's output.

    If ``config`` enables an approximation (``psi`` or ``rho`` below 1)
    the run is handed to :func:`parm.approx.mine_pioneer_approx`.
    """
    if config.approximate:
        from .approx import mine_pioneer_approx
        return mine_pioneer_approx(g, config)
    return _Miner(g, config).run()
