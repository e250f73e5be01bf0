"""Homophily distance over seven categorical profile attributes."""
from __future__ import annotations

import csv

import numpy as np

from .curves import per_degree_curve

ATTRIBUTE_COLUMNS = ("flag", "gender", "major", "major2", "dorm", "year", "highschool")
MISSING = 0


class CoverageError(ValueError):
    def __init__(self, missing):
        self.missing = list(missing)
        shown = ", ".join(str(m) for m in self.missing[:10])
        more = "" if len(self.missing) <= 10 else f" (+{len(self.missing) - 10} more)"
        super().__init__(f"no attributes for {len(self.missing)} nodes: {shown}{more}")


class AttributeTable:
    """Seven integer codes per node, ``0`` meaning missing.

    ``codes`` is an ``(n, 7)`` array indexed by internal node id; ``present``
    marks rows that were actually supplied.
    """

    def __init__(self, codes, present=None):
        codes = np.asarray(codes, dtype=np.int64)
        if codes.ndim != 2 or codes.shape[1] != len(ATTRIBUTE_COLUMNS):
            raise ValueError(f"attribute table needs {len(ATTRIBUTE_COLUMNS)} columns")
        if np.any(codes < 0):
            raise ValueError("attribute codes must be nonnegative")
        self.codes = codes
        self.present = (
            np.ones(len(codes), dtype=bool) if present is None else np.asarray(present, bool)
        )

    def __len__(self):
        return len(self.codes)

    @classmethod
    def read_csv(cls, path, id_map, n):
        """Load ``node_id,flag,gender,major,major2,dorm,year,highschool``.

        ``id_map`` maps external ids (as they appear in the edge list) to
        internal ids; rows for unknown ids are ignored.
        """
        codes = np.zeros((n, len(ATTRIBUTE_COLUMNS)), dtype=np.int64)
        present = np.zeros(n, dtype=bool)
        lookup = {str(k): v for k, v in id_map.items()}
        with open(path, "r", encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            for lineno, row in enumerate(reader, start=1):
                if not row or row[0].startswith("#"):
                    continue
                if lineno == 1 and not row[0].lstrip("-").isdigit() and row[0] not in lookup:
                    continue
                if len(row) != 1 + len(ATTRIBUTE_COLUMNS):
                    raise ValueError(f"{path}:{lineno}: expected 8 fields, got {len(row)}")
                node = lookup.get(row[0].strip())
                if node is None:
                    continue
                codes[node] = [int(x) for x in row[1:]]
                present[node] = True
        return cls(codes, present)


def homophily_distance(t, i, j, skip_missing=False):
    """Euclidean norm of per-attribute binary disagreement between ``i`` and ``j``."""
    for v in (i, j):
        if not (0 <= v < len(t)) or not t.present[v]:
            raise KeyError(f"no attribute row for node {v}")
    a, b = t.codes[i], t.codes[j]
    return float(_distances(a[None, :], b[None, :], skip_missing)[0])


def _distances(a, b, skip_missing):
    differ = a != b
    if not skip_missing:
        return np.sqrt(differ.sum(axis=1))
    both = (a != MISSING) & (b != MISSING)
    compared = both.sum(axis=1)
    diff = (differ & both).sum(axis=1)
    out = np.zeros(len(a), dtype=np.float64)
    # rescale the compared slots back to the full seven
    np.divide(diff * len(ATTRIBUTE_COLUMNS), compared, out=out, where=compared > 0)
    return np.sqrt(out)


def node_homophily(g, t, i, skip_missing=False):
    """Mean homophily distance from ``i`` to its neighbors; None if ``i`` is isolated."""
    nbrs = g.neighbors(i)
    if nbrs.size == 0:
        return None
    return float(np.mean([homophily_distance(t, i, int(j), skip_missing) for j in nbrs]))


def node_homophilies(g, t, skip_missing=False):
    """``d_i`` for every node, NaN where the node is isolated."""
    _check_coverage(g, t)
    src, dst = g.arcs()
    d = _distances(t.codes[src], t.codes[dst], skip_missing)
    deg = g.degrees
    sums = np.bincount(src, weights=d, minlength=g.n)
    out = np.full(g.n, np.nan)
    np.divide(sums, deg, out=out, where=deg > 0)
    return out


def homophily_curve(g, t, binning=None, skip_missing=False):
    """H(k): per-degree mean of ``d_i`` over non-isolated nodes."""
    d = node_homophilies(g, t, skip_missing)
    return per_degree_curve(g.degrees, np.nan_to_num(d), binning, mask=g.degrees > 0)


def _check_coverage(g, t):
    if len(t) != g.n:
        raise ValueError(f"attribute table has {len(t)} rows for {g.n} nodes")
    missing = np.flatnonzero((g.degrees > 0) & ~t.present)
    if missing.size:
        raise CoverageError(missing.tolist())
