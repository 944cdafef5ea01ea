from __future__ import annotations

import numpy as np
import pytest
from scipy import stats

from parm import GenSpec, generate
from parm.synthgen import GenSpecError


def graph_bytes(g):
    return g.edge_triples().tobytes() + repr(g.vertex_attr_lists()).encode()


def test_exact_edge_count_and_determinism():
    spec = GenSpec(100, 500, "uniform", n_labels=3, n_attrs=10, avg_attrs=2.0, seed=7)
    g = generate(spec)
    assert g.n_vertices == 100 and g.n_edges == 500
    assert graph_bytes(generate(spec)) == graph_bytes(g)
    assert graph_bytes(generate(GenSpec(100, 500, "uniform", 3, 10, 2.0, seed=8))) != graph_bytes(g)


def test_dense_request_fills_every_triple():
    g = generate(GenSpec(4, 32, "uniform", n_labels=2, n_attrs=1, seed=0))
    assert g.n_edges == 32


@pytest.mark.parametrize("kwargs", [
    dict(n_vertices=0, n_edges=0),
    dict(n_vertices=3, n_edges=-1),
    dict(n_vertices=3, n_edges=10),                       # more than 3*3*1 triples
    dict(n_vertices=3, n_edges=1, distribution="zipf"),
    dict(n_vertices=3, n_edges=1, n_attrs=2, avg_attrs=3.0),
    dict(n_vertices=3, n_edges=1, lam=0.0),
])
def test_invalid_specs(kwargs):
    with pytest.raises(GenSpecError):
        GenSpec(**kwargs)


def test_mean_attribute_count():
    g = generate(GenSpec(20000, 0, n_attrs=10, avg_attrs=2.0, seed=1))
    counts = np.diff(g.attr_ptr)
    assert abs(counts.mean() - 2.0) < 0.05
    assert counts.max() <= 10
    big = generate(GenSpec(2000, 0, n_attrs=500, avg_attrs=2.0, seed=1))
    assert abs(np.diff(big.attr_ptr).mean() - 2.0) < 0.15


def test_uniform_targets_pass_chi_square():
    n, m = 1000, 50_000
    freq = np.zeros(n)
    for seed in range(10):
        g = generate(GenSpec(n, m, "uniform", n_labels=4, seed=seed))
        freq += np.bincount(g.edge_triples()[:, 2], minlength=n)
    assert stats.chisquare(freq).pvalue > 0.01


def test_exponential_is_more_skewed():
    wins = 0
    for seed in range(20):
        u = generate(GenSpec(500, 2000, "uniform", seed=seed))
        e = generate(GenSpec(500, 2000, "exponential", seed=seed))
        ratio = lambda g: g.in_degree.max() / g.in_degree.mean()
        wins += ratio(e) > ratio(u)
    assert wins == 20


def test_labels_uniform():
    g = generate(GenSpec(500, 20_000, n_labels=5, seed=3))
    counts = np.bincount(g.edge_triples()[:, 1], minlength=5)
    assert stats.chisquare(counts).pvalue > 0.01
