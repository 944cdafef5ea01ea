"""Level-wise baseline miner.

It enumerates every candidate its search space allows and evaluates each
one from scratch with :func:`parm.patterns.match_mask`, then intersects all
pairs of frequent patterns for rules.  It is slow by design and serves as the
reference that the optimised miner must reproduce exactly.

Source attribute sets are drawn from the frequent attribute sets.  The later
positions of a pattern range over every attribute set that occurs on some
vertex: a frequent pattern can end in an attribute set shared by a single hub
vertex, so restricting those positions to frequent sets would lose results.
"""
from __future__ import annotations

import numpy as np

from .config import MiningConfig
from .graph import PropertyGraph
from .measures import RuleMeasures
from .patterns import PathPattern, dominates, match_mask
from .report import RunReport
from .results import FrequentSets

__all__ = [
    "mine_frequent_attribute_sets",
    "attribute_set_tidsets",
    "mine_simple_patterns_baseline",
    "mine_reachability_baseline",
    "mine_rules_baseline",
    "mine_baseline",
]


def attribute_set_tidsets(g: PropertyGraph, theta: int,
                          vertices: np.ndarray | None = None) -> dict[tuple[int, ...], np.ndarray]:
    """Apriori over vertex attribute sets, returning the supporting vertices.

    Level ``m + 1`` candidates join two frequent ``m``-sets that share their
    first ``m - 1`` items; a candidate survives only if all of its ``m``-subsets
    are frequent.  Supports are counted by intersecting the sorted vertex
    lists of the two parents.  ``vertices`` restricts counting to a subset.
    """
    keep = None
    if vertices is not None:
        keep = np.zeros(g.n_vertices, dtype=np.bool_)
        keep[vertices] = True
    level: dict[tuple[int, ...], np.ndarray] = {}
    for a in range(g.n_attrs):
        vs = g.attr_vertices(a)
        if keep is not None:
            vs = vs[keep[vs]]
        if vs.shape[0] >= theta:
            level[(a,)] = vs
    out = dict(level)
    while level:
        keys = sorted(level)
        nxt: dict[tuple[int, ...], np.ndarray] = {}
        for i, x in enumerate(keys):
            for y in keys[i + 1:]:
                if x[:-1] != y[:-1]:
                    break
                cand = x + (y[-1],)
                if any(cand[:j] + cand[j + 1:] not in level for j in range(len(cand) - 2)):
                    continue
                vs = np.intersect1d(level[x], level[y], assume_unique=True)
                if vs.shape[0] >= theta:
                    nxt[cand] = vs
        out.update(nxt)
        level = nxt
    return out


def mine_frequent_attribute_sets(g: PropertyGraph, theta: int) -> dict[tuple[int, ...], int]:
    """Every attribute set held by at least ``theta`` vertices, with its count."""
    return {a: int(vs.shape[0]) for a, vs in attribute_set_tidsets(g, theta).items()}


def _occurring_sets(g: PropertyGraph) -> list[tuple[int, ...]]:
    return sorted(mine_frequent_attribute_sets(g, 1))


def mine_simple_patterns_baseline(g: PropertyGraph, theta: int, k: int,
                                  attrsets: dict[tuple[int, ...], int],
                                  report: RunReport | None = None) -> list[dict[PathPattern, int]]:
    """Frequent simple patterns of length 1..k, level by level."""
    report = report or RunReport("baseline", {})
    occurring = _occurring_sets(g)
    prev = [PathPattern.attrset(a) for a in sorted(attrsets)]
    levels: list[dict[PathPattern, int]] = []
    for i in range(1, k + 1):
        cur: dict[PathPattern, int] = {}
        with report.timed(f"simple-{i}") as stats:
            for p in prev:
                for lab in range(g.n_labels):
                    for a in occurring:
                        q = p.extend(lab, a)
                        c = int(np.count_nonzero(match_mask(g, q)))
                        stats.generated += 1
                        if c >= theta:
                            cur[q] = c
                            stats.frequent += 1
                        else:
                            stats.infrequent += 1
        levels.append(cur)
        prev = sorted(cur, key=PathPattern.sort_key)
    return levels


def mine_reachability_baseline(g: PropertyGraph, theta: int, k: int | None,
                               attrsets: dict[tuple[int, ...], int],
                               report: RunReport | None = None) -> dict[PathPattern, int]:
    """Frequent reachability patterns ``<A0, l*, A1>``.

    ``k`` caps the hop count (``None`` for unbounded reachability).
    """
    report = report or RunReport("baseline", {})
    occurring = _occurring_sets(g)
    out: dict[PathPattern, int] = {}
    with report.timed("reach") as stats:
        sources = sorted(attrsets)
        for lab in range(g.n_labels):
            for a0 in sources:
                for a1 in occurring:
                    q = PathPattern.reach(a0, lab, a1)
                    c = int(np.count_nonzero(match_mask(g, q, k)))
                    stats.generated += 1
                    if c >= theta:
                        out[q] = c
                        stats.frequent += 1
                    else:
                        stats.infrequent += 1
    return out


def mine_rules_baseline(g: PropertyGraph, theta: int, patterns: dict[PathPattern, int],
                        max_hops: int | None = None,
                        report: RunReport | None = None) -> dict[tuple[PathPattern, PathPattern], RuleMeasures]:
    """All rules ``X => Y`` over pairs of frequent patterns with asupp >= theta.

    Pairs where one side dominates the other are excluded.  Intersection
    sizes for all pairs come from one product of the 0/1 match matrix.
    """
    report = report or RunReport("baseline", {})
    pats = sorted(patterns, key=PathPattern.sort_key)
    rules: dict[tuple[PathPattern, PathPattern], RuleMeasures] = {}
    with report.timed("rules") as stats:
        if not pats:
            return rules
        m = np.stack([match_mask(g, p, max_hops) for p in pats]).astype(np.float64)
        inter = m @ m.T  # exact: every entry is an integer below 2**53
        n_pairs = len(pats) * (len(pats) - 1) // 2
        # a dominating pair intersects in the smaller match set, whose size
        # is at least theta, so every such pair is among the frequent ones
        rows, cols = np.nonzero(np.triu(inter >= theta, k=1))
        n_dominated = 0
        for i, j in zip(rows.tolist(), cols.tolist()):
            x, y = pats[i], pats[j]
            if dominates(x, y) or dominates(y, x):
                n_dominated += 1
                continue
            c = int(inter[i, j])
            sx, sy = patterns[x], patterns[y]
            rules[(x, y)] = RuleMeasures(c, sx, sy, g.n_vertices)
            rules[(y, x)] = RuleMeasures(c, sy, sx, g.n_vertices)
        stats.generated += n_pairs - n_dominated
        stats.frequent += len(rules) // 2
        stats.infrequent += n_pairs - n_dominated - len(rules) // 2
    return rules


def mine_baseline(g: PropertyGraph, config: MiningConfig) -> FrequentSets:
    theta = config.effective_theta(g.n_vertices)
    report = RunReport("baseline", config.as_dict(), g.n_vertices, g.n_edges, theta)
    with report.timed("attrsets") as ph:
        p0 = mine_frequent_attribute_sets(g, theta)
        ph.generated = ph.frequent = len(p0)
    simple = mine_simple_patterns_baseline(g, theta, config.k, p0, report)
    reach = mine_reachability_baseline(g, theta, config.max_hops, p0, report)
    fs = FrequentSets(g.n_vertices, theta, config.k,
                      attrsets={PathPattern.attrset(a): c for a, c in p0.items()},
                      simple=simple, reach=reach, report=report)
    fs.rules = mine_rules_baseline(g, theta, fs.patterns(), config.max_hops, report)
    report.rule_count = len(fs.rules)
    report.pattern_count = len(fs.patterns())
    report.finish()
    return fs

