from __future__ import annotations

import random

import numpy as np
import pytest

from parm import MiningConfig, PathPattern, PropertyGraph, match_set, mine_baseline, mine_pioneer
from parm.index import MatchIndex, UnknownPatternError, extend_from_index
from parm.patterns import dominates
from parm.pioneer import (TargetSets, compute_target_sets, horizontal_extend, prefix_bound,
                          reach_bound, suffix_bound, vertical_extend)

import oracle


def bound_graph():
    """|E({1}, 0)| = 3 and d_m = 2 on 20 vertices (no saturation)."""
    attrs = [[0]] * 20
    attrs[3] = attrs[4] = [1]
    return PropertyGraph(20, attrs, [(0, 0, 3), (1, 0, 3), (2, 0, 4)], 1, 2)


def test_suffix_bound_formula():
    gi = bound_graph().indexes
    assert gi.d_m == 2
    assert suffix_bound(gi, (1,), 0, 3) == 12
    assert suffix_bound(gi, (0,), 0, 1) == 0
    assert suffix_bound(gi, (1,), 0, 10) == 20        # saturates at |V|
    with pytest.raises(ValueError):
        suffix_bound(gi, (1,), 0, 0)


def test_prefix_bound_formula():
    g = bound_graph()
    gi = g.indexes
    assert prefix_bound(gi, (0,), 0, 1) == gi.vertex_set_size((0,), 0) == 3
    assert prefix_bound(gi, (1,), 0, 2) == 0


def test_reach_bound():
    gi = bound_graph().indexes
    assert reach_bound(gi, (1,), 0, 2) == 3 * (1 + 2)
    assert reach_bound(gi, (1,), 0, None) == 20
    assert reach_bound(gi, (0,), 0, None) == 0


@pytest.mark.parametrize("seed", range(8))
def test_bounds_are_sound(seed):
    rng = random.Random(seed)
    g = oracle.random_graph(seed, rng.randint(6, 30), rng.randint(6, 70), 4, 2)
    gi = g.indexes
    for key, verts in oracle.match_sets(g, 3).items():
        p = oracle.to_pattern(key)
        if p.length == 0:
            continue
        if p.is_reach:
            assert reach_bound(gi, p.attrs[1], p.labels[0], 3) >= len(verts)
            continue
        i = p.length
        assert suffix_bound(gi, p.attrs[-1], p.labels[-1], i) >= len(verts)
        for j in range(i):
            assert prefix_bound(gi, p.attrs[j], p.labels[j], j + 1) >= len(verts)


def test_target_sets_trivial_cases(fig1):
    gi = fig1.indexes
    t = compute_target_sets(gi, 1, 2)
    nonzero = {(int(a), int(l)) for a, l in zip(*np.nonzero(gi.edge_counts))}
    assert {(a, l) for l, attrs in t.attrs_by_label[1].items() for a in attrs} == nonzero
    flat = PropertyGraph(4, [[0]] * 4, [(0, 0, 1), (2, 0, 3)], 1, 1)
    t = compute_target_sets(flat.indexes, 5, 2)
    assert not any(t.attrs_by_label[1:]) and not any(t.labels_by_attr[1:]) and not t.reach_targets


def test_fig1_target_sets_from_formula(fig1):
    gi, theta = fig1.indexes, 2
    t = compute_target_sets(gi, theta, 2)
    d = max(np.bincount(fig1.edge_triples()[:, 2]))
    for i in (1, 2):
        for lab in range(fig1.n_labels):
            expect = tuple(a for a in range(fig1.n_attrs)
                           if min(gi.edge_counts[a, lab] * d ** (i - 1), 12) >= theta)
            assert t.attrs_by_label[i].get(lab, ()) == expect
        for a in range(fig1.n_attrs):
            expect = {lab for lab in range(fig1.n_labels)
                      if min(gi.vertex_counts[a, lab] * d ** (i - 1), 12) >= theta}
            assert set(t.labels_by_attr[i].get(a, ())) == expect
        # the bound grows with the length
    for lab, attrs in t.attrs_by_label[1].items():
        assert set(attrs) <= set(t.attrs_by_label[2][lab])


def test_vertical_extend_small_cases():
    t = TargetSets(1, 1, [{}, {0: (1,)}], [{}, {0: frozenset({0})}], {})
    assert vertical_extend([], t) == []
    p = PathPattern.attrset((0,))
    assert vertical_extend([p], t) == [PathPattern.simple([(0,), (1,)], [0])]
    # a label must pass for every attribute of the last set
    q = PathPattern.attrset((0, 2))
    assert vertical_extend([q], t) == []


def test_horizontal_extend_examples():
    cs_art = PathPattern.simple([(0,), (2,)], [0])
    male_art = PathPattern.simple([(1,), (2,)], [0])
    other_label = PathPattern.simple([(1,), (2,)], [1])
    assert horizontal_extend([cs_art, male_art]) == [PathPattern.simple([(0, 1), (2,)], [0])]
    assert horizontal_extend([cs_art, other_label]) == []
    # different positions combine too
    cs_chem = PathPattern.simple([(0,), (3,)], [0])
    assert PathPattern.simple([(0,), (2, 3)], [0]) in horizontal_extend([cs_art, cs_chem])


def index_for(g):
    idx = MatchIndex(g, [np.arange(g.n_vertices)])
    return idx


def test_extend_from_index_chain():
    g = PropertyGraph(4, [[0]] * 4, [(0, 0, 1), (1, 0, 2), (2, 0, 3)], 1, 1)
    idx = index_for(g)
    pid = idx.add_attrset((0,))
    step1 = idx.add(PathPattern.simple([(0,), (0,)], [0]), [extend_from_index(idx, pid, 0, (0,))])
    s, t = extend_from_index(idx, step1, 0, (0,))
    p2 = PathPattern.simple([(0,), (0,), (0,)], [0, 0])
    assert np.unique(s).tolist() == match_set(g, p2).tolist() == [0, 1]
    assert t.tolist() == [2, 3]
    # a target with no outgoing edge creates no entry
    lone = PropertyGraph(2, [[0], [0]], [(0, 0, 1)], 1, 1)
    li = index_for(lone)
    q = li.add(PathPattern.simple([(0,), (0,)], [0]), [extend_from_index(li, li.add_attrset((0,)), 0, (0,))])
    assert extend_from_index(li, q, 0, (0,))[0].shape[0] == 0
    with pytest.raises(UnknownPatternError):
        extend_from_index(li, 99, 0, (0,))


@pytest.mark.parametrize("seed", range(6))
def test_extend_from_index_equals_match_set(seed):
    rng = random.Random(seed)
    g = oracle.random_graph(seed, rng.randint(20, 80), rng.randint(30, 250), 4, 3)
    idx = MatchIndex(g, [np.arange(0, g.n_vertices, 2), np.arange(1, g.n_vertices, 2)])
    frontier = [(PathPattern.attrset((a,)), idx.add_attrset((a,))) for a in range(4)]
    for _ in range(2):
        nxt = []
        for p, pid in frontier:
            for lab in range(3):
                a = (rng.randrange(4),)
                q = p.extend(lab, a)
                pairs = [extend_from_index(idx, pid, lab, a, part) for part in range(2)]
                qid = idx.add(q, pairs)
                assert idx.sources(qid).tolist() == match_set(g, q).tolist()
                for v in idx.sources(qid)[:3].tolist():
                    # entry targets are exactly the ends of matching walks
                    ends = {w[-1] for w, labels in oracle.walks(oracle.adjacency(g), v, q.length)
                            if labels == q.labels and all(set(q.attrs[j]) <= g.attr_set(w[j])
                                                          for j in range(len(w)))}
                    assert set(idx.targets(v, qid).tolist()) == ends
                nxt.append((q, qid))
        frontier = nxt


def test_fig1_rules(fig1, pat):
    fs = mine_pioneer(fig1, MiningConfig(theta=2, k=2))
    r1 = (pat("{CS}-[Follows]->{Art}"), pat("{Male}-[Follows]->{Female}"))
    r3 = (pat("{CS}-[Follows]->{Art}"), pat("{Male}-[BelongTo]->{Uni}"))
    assert fs.rules[r1].as_floats() == (2.0, 1 / 6, 1.0, 6.0)
    assert fs.rules[r3].asupp == 2


def test_edgeless_graph():
    g = PropertyGraph(5, [[0], [0], [0, 1], [1], []], [], 1, 2)
    fs = mine_pioneer(g, MiningConfig(theta=2, k=2))
    assert fs.attrsets and not fs.patterns() and not fs.rules


@pytest.mark.parametrize("idx", range(1, 100, 9))
def test_same_as_baseline_with_fewer_candidates(idx):
    seed, g, theta, k = oracle.criterion_graphs(idx + 1)[idx]
    cfg = MiningConfig(theta=theta, k=k)
    p, b = mine_pioneer(g, cfg), mine_baseline(g, cfg)
    assert p.same_output(b)
    assert p.report.total_candidates() <= b.report.total_candidates()
    assert all(ph.consistent() for ph in p.report.phases + b.report.phases)
    for x, y in p.rules:
        assert not dominates(x, y) and not dominates(y, x)


def test_unbounded_star_mode():
    # a 4-hop chain: capped at k=1 only direct edges count
    g = PropertyGraph(5, [[0]] * 4 + [[1]], [(i, 0, i + 1) for i in range(4)], 1, 2)
    capped = mine_pioneer(g, MiningConfig(theta=2, k=1))
    free = mine_pioneer(g, MiningConfig(theta=2, k=1, star_mode="unbounded"))
    reach01 = PathPattern.reach((0,), 0, (1,))
    assert reach01 not in capped.reach and free.reach[reach01] == 4
    assert free.same_output(mine_baseline(g, MiningConfig(theta=2, k=1, star_mode="unbounded")))


def test_relative_theta(fig1):
    fs = mine_pioneer(fig1, MiningConfig(theta=0.5, relative=True, k=1))
    assert fs.theta == 6
