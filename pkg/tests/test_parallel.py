from __future__ import annotations

import math
import random

import numpy as np
import pytest

from parm import MiningConfig, PropertyGraph, match_set, mine_pioneer
from parm.parallel import WorkerPool, estimate_cost, partition, prune_irrelevant
from parm.pioneer import compute_target_sets

import oracle


def test_hand_simulated_split():
    part = partition(np.arange(4), np.array([4, 3, 2, 1]), 2)
    assert [p.tolist() for p in part.parts()] == [[0, 3], [1, 2]]
    assert part.loads.tolist() == [5, 5]


def test_single_partition():
    part = partition(np.arange(5), np.array([3, 1, 4, 1, 5]), 1)
    assert part.parts()[0].tolist() == [0, 1, 2, 3, 4]
    with pytest.raises(ValueError):
        partition(np.arange(3), np.ones(3, dtype=np.int64), 0)


@pytest.mark.parametrize("n,N", [(10, 3), (7, 7), (3, 8), (100, 4), (0, 2)])
def test_cap_and_coverage(n, N):
    rng = np.random.default_rng(n + N)
    verts = rng.permutation(1000)[:n]
    part = partition(verts, rng.integers(0, 10, n), N)
    assert part.counts.max(initial=0) <= max(1, math.ceil(n / N))
    assert sorted(np.concatenate(part.parts()).tolist()) == sorted(verts.tolist())


def test_uniform_costs_balance():
    part = partition(np.arange(103), np.full(103, 2), 4)
    assert part.counts.max() - part.counts.min() <= 1
    nonempty = part.loads[part.counts > 0]
    assert nonempty.max() <= 2 * nonempty.min()


def test_tie_breaks_are_deterministic():
    a = partition(np.arange(50), np.ones(50, dtype=np.int64), 3)
    b = partition(np.arange(50), np.ones(50, dtype=np.int64), 3)
    assert np.array_equal(a.assignment, b.assignment)
    # equal costs go by vertex id to the lowest-loaded, lowest-id thread
    assert a.assignment[:3].tolist() == [0, 1, 2]


def test_prune_rule():
    # 0: target attr, no edges -> kept; 1: nothing -> pruned; 2: target-labelled edge -> kept
    g = PropertyGraph(4, [[0], [1], [1], []], [(2, 0, 3), (3, 1, 1)], 2, 2)
    kept = prune_irrelevant(g, np.array([0]), np.array([0]))
    assert kept.tolist() == [0, 2]


def test_cost_formula():
    g = PropertyGraph(4, [[0, 1, 2], [], [], []], [(0, 0, 1), (0, 0, 2), (0, 1, 3), (0, 2, 1)], 3, 3)
    assert estimate_cost(g, np.array([0, 1]), np.array([0, 1]))[0] == 3 * 2
    assert estimate_cost(g, np.array([0]), np.array([2]))[1] == 0


def test_fig1_costs_and_pruning(fig1):
    t = compute_target_sets(fig1.indexes, 2, 2)
    ta, tl = sorted(t.all_attrs()), sorted(t.all_labels())
    costs = estimate_cost(fig1, np.array(ta), np.array(tl))
    for v in range(fig1.n_vertices):
        d_t = sum(1 for s, lab, _ in fig1.edge_triples().tolist() if s == v and lab in tl)
        assert costs[v] == d_t * len(fig1.attr_set(v) & set(ta))
    kept = set(prune_irrelevant(fig1, np.array(ta), np.array(tl)).tolist())
    fs = mine_pioneer(fig1, MiningConfig(theta=2, k=2))
    for p in fs.patterns():
        assert set(match_set(fig1, p, 2).tolist()) <= kept


def test_worker_pool_keeps_order():
    with WorkerPool(3) as pool:
        assert pool.map(lambda x: x * x, range(10)) == [x * x for x in range(10)]


def test_groups_cover_partitions():
    part = partition(np.arange(20), np.arange(20), 4)
    groups = part.groups(2)
    assert len(groups) == 2
    assert sorted(np.concatenate(groups).tolist()) == list(range(20))
    assert part.groups(1)[0].tolist() == list(range(20))


@pytest.mark.parametrize("idx", [5, 23, 50, 81])
def test_thread_count_invariance(idx):
    seed, g, theta, k = oracle.criterion_graphs(idx + 1)[idx]
    ref = mine_pioneer(g, MiningConfig(theta=theta, k=k, threads=1))
    for n in (2, 4, 8):
        for workers in (1, n):
            fs = mine_pioneer(g, MiningConfig(theta=theta, k=k, threads=n, workers=workers))
            assert fs.same_output(ref)
            assert max(fs.report.extra["partition_counts"]) <= math.ceil(
                (g.n_vertices - fs.report.extra["pruned_vertices"]) / n)
