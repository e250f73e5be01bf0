"""Per-degree aggregation and the ``k,mean,count`` CSV contract."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class BinSpec:
    """Grouping of nodes by degree.

    ``kind="exact"`` groups by exact degree. ``kind="log"`` uses integer bins
    ``[lo, hi)`` starting ``[0,1), [1,2)`` and growing by ``ratio`` (each bin at
    least one degree wide).
    """

    kind: str = "exact"
    ratio: float = 1.25

    def __post_init__(self):
        if self.kind not in ("exact", "log"):
            raise ValueError(f"unknown bin kind {self.kind!r}")
        if self.kind == "log" and not self.ratio > 1.0:
            raise ValueError("log bin ratio must exceed 1")

    @classmethod
    def parse(cls, text):
        """Parse ``exact`` or ``log:RATIO``."""
        if text == "exact":
            return cls()
        if text.startswith("log"):
            _, _, r = text.partition(":")
            return cls("log", float(r) if r else 1.25)
        raise ValueError(f"bad bin spec {text!r}; expected 'exact' or 'log:RATIO'")

    def edges(self, kmax):
        """Bin boundaries covering ``0..kmax`` (log kind only)."""
        out = [0, 1]
        while out[-1] <= kmax:
            out.append(max(out[-1] + 1, math.ceil(out[-1] * self.ratio)))
        return np.asarray(out, dtype=np.int64)


@dataclass
class DegreeCurve:
    """Aggregated statistic per degree (or per degree bin).

    ``k_lo``/``k_hi`` are the bin bounds, ``[k_lo, k_hi)``; for exact curves
    ``k_hi == k_lo + 1`` and :attr:`k` is just ``k_lo``.
    """

    k_lo: np.ndarray
    k_hi: np.ndarray
    mean: np.ndarray
    count: np.ndarray
    binned: bool = False

    def __post_init__(self):
        self.k_lo = np.asarray(self.k_lo, dtype=np.int64)
        self.k_hi = np.asarray(self.k_hi, dtype=np.int64)
        self.mean = np.asarray(self.mean, dtype=np.float64)
        self.count = np.asarray(self.count, dtype=np.int64)
        n = len(self.k_lo)
        if not (len(self.k_hi) == len(self.mean) == len(self.count) == n):
            raise ValueError("curve columns differ in length")
        if n > 1 and np.any(self.k_lo[1:] < self.k_hi[:-1]):
            raise ValueError("curve bins must be disjoint and ascending")

    @classmethod
    def exact(cls, k, mean, count):
        k = np.asarray(k, dtype=np.int64)
        return cls(k, k + 1, mean, count)

    @property
    def k(self):
        """Representative degree: the degree itself, or the bin's geometric midpoint."""
        if not self.binned:
            return self.k_lo.astype(np.float64)
        lo = np.maximum(self.k_lo, 1).astype(np.float64)
        return np.sqrt(lo * (self.k_hi - 1).astype(np.float64).clip(min=1.0))

    def __len__(self):
        return len(self.k_lo)

    def map_mean(self, fn):
        return DegreeCurve(self.k_lo, self.k_hi, fn(self.mean), self.count, self.binned)

    def select(self, mask):
        return DegreeCurve(
            self.k_lo[mask], self.k_hi[mask], self.mean[mask], self.count[mask], self.binned
        )

    def __eq__(self, other):
        if not isinstance(other, DegreeCurve):
            return NotImplemented
        return (
            self.binned == other.binned
            and np.array_equal(self.k_lo, other.k_lo)
            and np.array_equal(self.k_hi, other.k_hi)
            and np.array_equal(self.mean, other.mean)
            and np.array_equal(self.count, other.count)
        )


def per_degree_curve(degrees, values, binning=None, mask=None):
    """Mean of ``values`` over the nodes in each degree group.

    Parameters
    ----------
    degrees : array_like of int
        Node degrees.
    values : array_like of float
        One value per node.
    binning : BinSpec, optional
        Defaults to exact degrees.
    mask : array_like of bool, optional
        Nodes to include; the rest are left out of both sums and counts.

    Groups with no included node are omitted.
    """
    degrees = np.asarray(degrees, dtype=np.int64)
    values = np.asarray(values, dtype=np.float64)
    if degrees.shape != values.shape:
        raise ValueError(
            f"values has length {values.size}, expected one per node ({degrees.size})"
        )
    binning = binning or BinSpec()
    if mask is not None:
        mask = np.asarray(mask, dtype=bool)
        degrees, values = degrees[mask], values[mask]
    if degrees.size == 0:
        return DegreeCurve([], [], [], [], binned=binning.kind == "log")
    if binning.kind == "exact":
        group = degrees
        counts = np.bincount(group)
        sums = np.bincount(group, weights=values, minlength=counts.size)
        k = np.flatnonzero(counts)
        return DegreeCurve.exact(k, sums[k] / counts[k], counts[k])
    edges = binning.edges(int(degrees.max()))
    group = np.searchsorted(edges, degrees, side="right") - 1
    counts = np.bincount(group, minlength=edges.size - 1)
    sums = np.bincount(group, weights=values, minlength=edges.size - 1)
    b = np.flatnonzero(counts)
    return DegreeCurve(edges[b], edges[b + 1], sums[b] / counts[b], counts[b], binned=True)


def normalize_knn_curve(curve, kmax):
    """Divide every mean by ``kmax``; counts unchanged."""
    if kmax < 1:
        raise ValueError("kmax must be at least 1")
    return curve.map_mean(lambda m: m / float(kmax))


def _fmt(x):
    return repr(float(x))


def write_curve(curve, path):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        if curve.binned:
            w.writerow(["k_lo", "k_hi", "mean", "count"])
            for lo, hi, m, c in zip(curve.k_lo, curve.k_hi, curve.mean, curve.count):
                w.writerow([int(lo), int(hi), _fmt(m), int(c)])
        else:
            w.writerow(["k", "mean", "count"])
            for k, m, c in zip(curve.k_lo, curve.mean, curve.count):
                w.writerow([int(k), _fmt(m), int(c)])


def read_curve(path):
    with open(path, "r", encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ValueError(f"{path}: empty curve file")
    head, body = rows[0], rows[1:]
    if head == ["k", "mean", "count"]:
        k = [int(r[0]) for r in body]
        return DegreeCurve.exact(k, [float(r[1]) for r in body], [int(r[2]) for r in body])
    if head == ["k_lo", "k_hi", "mean", "count"]:
        return DegreeCurve(
            [int(r[0]) for r in body],
            [int(r[1]) for r in body],
            [float(r[2]) for r in body],
            [int(r[3]) for r in body],
            binned=True,
        )
    raise ValueError(f"{path}: unrecognized curve header {head}")
