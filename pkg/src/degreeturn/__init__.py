"""Degree turning-point analytics for online social networks.

Per-node and per-degree structural measures (clustering, neighbor degree,
k-shell, tie strength), homophily and interaction curves, two-segment break
detection, and a degree-constrained tie-evolution model.
"""
from .bashift import ModelParams, constraint_factor, evolve, generate_ba
from .curves import BinSpec, DegreeCurve, per_degree_curve
from .graph import Graph, average_degree, build_graph, common_neighbor_count
from .turnpoint import break_consensus, detect_break

__version__ = "0.1.0"

__all__ = [
    "BinSpec",
    "DegreeCurve",
    "Graph",
    "ModelParams",
    "average_degree",
    "break_consensus",
    "build_graph",
    "common_neighbor_count",
    "constraint_factor",
    "detect_break",
    "evolve",
    "generate_ba",
    "per_degree_curve",
]
