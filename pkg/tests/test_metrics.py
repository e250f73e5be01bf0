import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from degreeturn.curves import (
    BinSpec, DegreeCurve, normalize_knn_curve, per_degree_curve, read_curve, write_curve,
)
from degreeturn.graph import Graph
from degreeturn.metrics import (
    average_clustering, clustering, clustering_coefficients, degree_ccdf, kshell_decompose,
    knn, neighbor_degrees, node_metrics, node_strength, node_strengths, tie_strength,
    tie_strengths,
)

import oracles


def _curve_rows(c):
    return [(int(k), float(m), int(n)) for k, m, n in zip(c.k_lo, c.mean, c.count)]


def test_ccdf_examples(triangle, star3):
    assert _curve_rows(degree_ccdf(triangle)) == [(2, 1.0, 3)]
    c = degree_ccdf(star3)
    assert c.k_lo.tolist() == [1, 3]
    assert c.mean.tolist() == [1.0, 0.25]


def test_clustering_examples(triangle, star3, path3):
    assert clustering(path3, 0) == 0.0
    assert clustering(triangle, 0) == 1.0
    assert clustering(star3, 0) == 0.0
    assert clustering(Graph(3), 1) == 0.0


def test_clustering_matches_triangle_oracle():
    rnd = random.Random(12)
    edges = oracles.random_graph(rnd, 12, 0.4)
    g = Graph.from_edges(12, edges)
    adj = oracles.adjacency(12, edges)
    cc = clustering_coefficients(g)
    for i in range(12):
        assert clustering(g, i) == pytest.approx(float(oracles.clustering(adj, i)), abs=1e-15)
        assert cc[i] == pytest.approx(float(oracles.clustering(adj, i)), abs=1e-15)


def test_average_clustering(triangle, path3):
    assert average_clustering(triangle) == 1.0
    assert average_clustering(path3) == 0.0
    with pytest.raises(ValueError):
        average_clustering(Graph(0))


def test_knn_examples(triangle, star3, path3):
    assert knn(triangle, 0) == 2.0
    assert knn(star3, 0) == 1.0
    assert [knn(star3, i) for i in (1, 2, 3)] == [3.0, 3.0, 3.0]
    assert knn(path3, 1) == 1.0
    assert knn(Graph(2), 0) == 0.0


def test_kshell_examples(k4):
    rnd = random.Random(5)
    for n in (2, 5, 17):
        tree = [(v, rnd.randrange(v)) for v in range(1, n)]
        assert kshell_decompose(Graph.from_edges(n, tree)).tolist() == [1] * n
    assert kshell_decompose(k4).tolist() == [3, 3, 3, 3]
    g = Graph.from_edges(5, [(a, b) for a in range(4) for b in range(a + 1, 4)] + [(3, 4)])
    assert kshell_decompose(g).tolist() == [3, 3, 3, 3, 1]
    assert kshell_decompose(Graph(3)).tolist() == [0, 0, 0]


def test_kshell_matches_core_oracle():
    rnd = random.Random(30)
    edges = oracles.random_graph(rnd, 30, 0.2)
    g = Graph.from_edges(30, edges)
    ref = oracles.core_numbers(oracles.adjacency(30, edges))
    assert kshell_decompose(g).tolist() == [ref[v] for v in range(30)]


def test_tie_strength_examples(triangle, path3):
    assert tie_strength(triangle, 0, 1) == 1.0
    assert tie_strength(path3, 0, 1) == 0.0
    assert tie_strength(Graph.from_edges(2, [(0, 1)]), 0, 1) == 0.0
    with pytest.raises(ValueError):
        tie_strength(path3, 0, 2)


def test_node_strength_examples(triangle, star3):
    assert node_strength(triangle, 0) == 1.0
    assert node_strength(star3, 0) == 0.0
    assert node_strength(Graph(2), 1) == 0.0


def test_node_strength_matches_oracle():
    rnd = random.Random(15)
    edges = oracles.random_graph(rnd, 15, 0.3)
    g = Graph.from_edges(15, edges)
    adj = oracles.adjacency(15, edges)
    ws = node_strengths(g)
    for i in range(15):
        assert ws[i] == pytest.approx(float(oracles.node_strength(adj, i)), abs=1e-12)
        assert node_strength(g, i) == pytest.approx(ws[i], abs=1e-12)


def test_per_degree_curve_examples(star3):
    c = per_degree_curve(star3.degrees, np.array([0.0, 1.0, 1.0, 1.0]))
    assert _curve_rows(c) == [(1, 1.0, 3), (3, 0.0, 1)]
    deg = np.array([1, 5, 9, 40, 40, 2, 0])
    for b in (None, BinSpec("log", 1.25)):
        assert np.all(per_degree_curve(deg, np.full(7, 0.37), b).mean == 0.37)
    with pytest.raises(ValueError):
        per_degree_curve(deg, np.zeros(3))


def test_normalize_knn_examples():
    c = DegreeCurve.exact([2], [10.0], [5])
    assert _curve_rows(normalize_knn_curve(c, 10)) == [(2, 1.0, 5)]
    assert normalize_knn_curve(c, 1) == c
    t = DegreeCurve.exact([2], [2.0], [3])
    assert _curve_rows(normalize_knn_curve(t, 2)) == [(2, 1.0, 3)]
    with pytest.raises(ValueError):
        normalize_knn_curve(c, 0)


def test_log_bins_are_disjoint_and_ascending():
    e = BinSpec("log", 1.25).edges(5000)
    assert e[0] == 0 and e[1] == 1
    assert np.all(np.diff(e) >= 1)
    assert e[-1] > 5000


_graphs = st.integers(1, 40).flatmap(
    lambda n: st.tuples(
        st.just(n),
        st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=200),
    )
)


@settings(max_examples=80, deadline=None)
@given(_graphs)
def test_metric_ranges(ge):
    n, edges = ge
    g = Graph.from_edges(n, edges)
    nm = node_metrics(g)
    assert len(nm.clustering) == len(nm.knn) == len(nm.kshell) == len(nm.strength) == n
    assert np.all((nm.clustering >= 0) & (nm.clustering <= 1))
    assert np.all((nm.strength >= 0) & (nm.strength <= 1))
    w = tie_strengths(g)
    assert np.all((w >= 0) & (w <= 1))
    assert np.all(nm.kshell <= nm.degree) and np.all(nm.kshell >= 0)
    c = degree_ccdf(g)
    assert c.mean[0] == 1.0 and np.all(np.diff(c.mean) <= 0)
    assert int(c.count.sum()) == n


@settings(max_examples=80, deadline=None)
@given(_graphs, st.sampled_from(["exact", "log:1.25", "log:2"]), st.randoms())
def test_curve_conservation(ge, bins, rnd):
    n, edges = ge
    g = Graph.from_edges(n, edges)
    vals = np.array([rnd.uniform(-5, 5) for _ in range(n)])
    c = per_degree_curve(g.degrees, vals, BinSpec.parse(bins))
    assert int(c.count.sum()) == n
    assert np.all(c.k_lo[1:] >= c.k_hi[:-1]) and np.all(c.k_hi > c.k_lo)
    assert (c.mean * c.count).sum() / n == pytest.approx(vals.mean(), abs=1e-12)


@settings(max_examples=50, deadline=None)
@given(_graphs, st.integers(0, 10**6), st.integers(0, 10**6))
def test_kshell_monotone_under_addition(ge, a, b):
    n, edges = ge
    g = Graph.from_edges(n, edges)
    before = kshell_decompose(g)
    i, j = a % n, b % n
    if i != j:
        g.add_edge(i, j)
    assert np.all(kshell_decompose(g) >= before)


def test_curve_csv_round_trip(tmp_path):
    rnd = random.Random(1)
    edges = oracles.random_graph(rnd, 40, 0.2)
    g = Graph.from_edges(40, edges)
    nm = node_metrics(g)
    for bins in (None, BinSpec("log", 1.25)):
        c = per_degree_curve(g.degrees, nm.clustering, bins)
        write_curve(c, tmp_path / "a.csv")
        back = read_curve(tmp_path / "a.csv")
        assert back == c
        write_curve(back, tmp_path / "b.csv")
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


def test_neighbor_degrees_vectorized_matches_scalar():
    rnd = random.Random(2)
    edges = oracles.random_graph(rnd, 25, 0.25)
    g = Graph.from_edges(25, edges)
    v = neighbor_degrees(g)
    assert all(math.isclose(v[i], knn(g, i), abs_tol=1e-12) for i in range(25))
