"""Per-node structural measures and their per-degree curves.

Degenerate cases: nodes of degree 0 or 1 get clustering 0; isolated nodes get
neighbor degree 0, strength 0 and shell 0; an edge between two degree-1
nodes has tie strength 0.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .curves import BinSpec, DegreeCurve, normalize_knn_curve, per_degree_curve
from .graph import common_neighbor_count

# -- single-node forms ---------------------------------------------------------


def clustering(g, i):
    """Local clustering coefficient of node ``i``."""
    k = g.degree(i)
    if k < 2:
        return 0.0
    nbrs = g.neighbors(i)
    links = sum(common_neighbor_count(g, i, j) for j in nbrs) // 2
    return 2.0 * links / (k * (k - 1))


def knn(g, i):
    """Mean degree of the neighbors of ``i``."""
    k = g.degree(i)
    if k == 0:
        return 0.0
    deg = g.degrees
    return float(deg[g.neighbors(i)].sum()) / k


def tie_strength(g, i, j):
    """Neighborhood overlap ``c / (k_i - 1 + k_j - 1 - c)`` of the edge ``{i, j}``."""
    if not g.has_edge(i, j):
        raise ValueError(f"({i}, {j}) is not an edge")
    c = common_neighbor_count(g, i, j)
    denom = g.degree(i) - 1 + g.degree(j) - 1 - c
    return c / denom if denom > 0 else 0.0


def node_strength(g, i):
    """Mean tie strength over the edges at ``i``."""
    k = g.degree(i)
    if k == 0:
        return 0.0
    return sum(tie_strength(g, i, int(j)) for j in g.neighbors(i)) / k


def kshell_decompose(g):
    """k-shell index of every node by iterative minimum-degree pruning."""
    return _kernels.core_numbers(g.indptr, g.indices)


# -- whole-graph passes --------------------------------------------------------


def arc_overlap(g):
    """Common-neighbor count for every arc, aligned with ``g.indices``."""
    return _kernels.arc_common_neighbors(g.indptr, g.indices)


def tie_strengths(g, common=None):
    """Tie strength for every arc, aligned with ``g.indices``."""
    if common is None:
        common = arc_overlap(g)
    deg = g.degrees
    src, dst = g.arcs()
    denom = (deg[src] - 1 + deg[dst] - 1 - common).astype(np.float64)
    out = np.zeros(common.size, dtype=np.float64)
    np.divide(common, denom, out=out, where=denom > 0)
    return out


def clustering_coefficients(g, common=None):
    if common is None:
        common = arc_overlap(g)
    deg = g.degrees
    src, _ = g.arcs()
    # each triangle at i is seen from both of its arcs
    links = np.bincount(src, weights=common, minlength=g.n) / 2.0
    pairs = deg * (deg - 1) / 2.0
    out = np.zeros(g.n, dtype=np.float64)
    np.divide(links, pairs, out=out, where=deg > 1)
    return out


def average_clustering(g):
    """Mean local clustering over all nodes, zeros included."""
    if g.n == 0:
        raise ValueError("average clustering of an empty graph is undefined")
    return float(clustering_coefficients(g).mean())


def neighbor_degrees(g):
    deg = g.degrees
    src, dst = g.arcs()
    sums = np.bincount(src, weights=deg[dst].astype(np.float64), minlength=g.n)
    out = np.zeros(g.n, dtype=np.float64)
    np.divide(sums, deg, out=out, where=deg > 0)
    return out


def node_strengths(g, common=None, w=None):
    if w is None:
        w = tie_strengths(g, common)
    deg = g.degrees
    src, _ = g.arcs()
    sums = np.bincount(src, weights=w, minlength=g.n)
    out = np.zeros(g.n, dtype=np.float64)
    np.divide(sums, deg, out=out, where=deg > 0)
    return out


def degree_ccdf(g):
    """``P(K >= k)`` at each observed degree; ``count`` holds nodes with degree k."""
    if g.n == 0:
        raise ValueError("CCDF of an empty graph is undefined")
    deg = g.degrees
    counts = np.bincount(deg)
    k = np.flatnonzero(counts)
    tail = np.cumsum(counts[::-1])[::-1]
    return DegreeCurve.exact(k, tail[k] / g.n, counts[k])


@dataclass
class NodeMetrics:
    """Per-node measures for one graph; arrays have length ``|V|``."""

    degree: np.ndarray
    clustering: np.ndarray
    knn: np.ndarray
    kshell: np.ndarray
    strength: np.ndarray

    def curves(self, binning=None):
        """C(k), k_nn(k), normalized k_nn(k), k_s(k) and w(k)."""
        deg = self.degree
        kmax = int(deg.max()) if deg.size else 0
        knn_curve = per_degree_curve(deg, self.knn, binning)
        return {
            "ck": per_degree_curve(deg, self.clustering, binning),
            "knn": knn_curve,
            "knn_norm": normalize_knn_curve(knn_curve, max(kmax, 1)),
            "ks": per_degree_curve(deg, self.kshell, binning),
            "wk": per_degree_curve(deg, self.strength, binning),
        }


def node_metrics(g):
    """One pass computing every per-node measure."""
    common = arc_overlap(g)
    return NodeMetrics(
        degree=g.degrees,
        clustering=clustering_coefficients(g, common),
        knn=neighbor_degrees(g),
        kshell=kshell_decompose(g),
        strength=node_strengths(g, common),
    )


__all__ = [
    "BinSpec",
    "DegreeCurve",
    "NodeMetrics",
    "arc_overlap",
    "average_clustering",
    "clustering",
    "clustering_coefficients",
    "degree_ccdf",
    "kshell_decompose",
    "knn",
    "neighbor_degrees",
    "node_metrics",
    "node_strength",
    "node_strengths",
    "normalize_knn_curve",
    "per_degree_curve",
    "tie_strength",
    "tie_strengths",
]
