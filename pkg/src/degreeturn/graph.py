"""Compact undirected simple graph.

Storage is CSR (``indptr``/``indices``, neighbors sorted ascending) for the
read-only metric passes. The first mutation materializes per-node sorted
Python lists, which the simulator edits in place with ``bisect``; the CSR view
is rebuilt lazily on the next read.
"""
from __future__ import annotations

import bisect
import csv
import io
import logging
import os
import re
from dataclasses import dataclass, field

import numpy as np

log = logging.getLogger(__name__)

_COMMENT_PREFIXES = ("#", "%")
_NODES_DIRECTIVE = re.compile(r"^#\s*nodes:\s*(\d+)\s*$")
_SPLIT = re.compile(r"[\s,]+")


class EdgeListError(ValueError):
    """Raised for unparseable or empty edge-list input."""


class Graph:
    """Undirected simple graph on nodes ``0..n-1``.

    Parameters
    ----------
    n : int
        Number of nodes. Isolated nodes are allowed.
    indptr, indices : numpy.ndarray
        CSR adjacency. Each undirected edge appears twice and every row must
        be sorted with no duplicates or self-loops. Use :meth:`from_edges`
        when the input is not already canonical.
    """

    def __init__(self, n, indptr=None, indices=None):
        n = int(n)
        if n < 0:
            raise ValueError("node count must be nonnegative")
        self.n = n
        if indptr is None:
            indptr = np.zeros(n + 1, dtype=np.int64)
            indices = np.zeros(0, dtype=np.int64)
        self._indptr = np.ascontiguousarray(indptr, dtype=np.int64)
        self._indices = np.ascontiguousarray(indices, dtype=np.int64)
        if self._indptr.shape != (n + 1,):
            raise ValueError("indptr must have length n + 1")
        self._adj = None
        self._m = int(self._indices.size // 2)

    @classmethod
    def from_edges(cls, n, edges):
        """Build from an iterable or ``(E, 2)`` array of pairs.

        Self-loops and repeated pairs are dropped silently; use
        :func:`build_graph` to get them counted.
        """
        arr = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if arr.size and (arr.min() < 0 or arr.max() >= n):
            raise ValueError("edge endpoint out of range")
        lo, hi = _canonical_pairs(arr)
        return cls._from_canonical(n, lo, hi)

    @classmethod
    def _from_canonical(cls, n, lo, hi):
        src = np.concatenate([lo, hi])
        dst = np.concatenate([hi, lo])
        order = np.lexsort((dst, src))
        indices = dst[order]
        counts = np.bincount(src, minlength=n)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(counts, out=indptr[1:])
        return cls(n, indptr, indices)

    # -- read side ---------------------------------------------------------

    def _sync(self):
        if self._adj is None or self._indptr is not None:
            return
        deg = np.fromiter((len(a) for a in self._adj), dtype=np.int64, count=self.n)
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        np.cumsum(deg, out=indptr[1:])
        indices = np.fromiter(
            (j for a in self._adj for j in a), dtype=np.int64, count=int(indptr[-1])
        )
        self._indptr, self._indices = indptr, indices

    @property
    def indptr(self):
        self._sync()
        return self._indptr

    @property
    def indices(self):
        self._sync()
        return self._indices

    @property
    def num_edges(self):
        return self._m

    @property
    def degrees(self):
        if self._adj is not None and self._indptr is None:
            return np.fromiter((len(a) for a in self._adj), dtype=np.int64, count=self.n)
        return np.diff(self._indptr)

    def degree(self, i):
        self._check(i)
        if self._adj is not None:
            return len(self._adj[i])
        return int(self._indptr[i + 1] - self._indptr[i])

    def neighbors(self, i):
        """Sorted neighbor ids of ``i`` as an int64 array."""
        self._check(i)
        if self._adj is not None:
            return np.asarray(self._adj[i], dtype=np.int64)
        return self._indices[self._indptr[i]:self._indptr[i + 1]]

    def has_edge(self, i, j):
        self._check(i)
        self._check(j)
        if self._adj is not None:
            a = self._adj[i]
            p = bisect.bisect_left(a, j)
            return p < len(a) and a[p] == j
        row = self.neighbors(i)
        p = np.searchsorted(row, j)
        return bool(p < row.size and row[p] == j)

    def edges(self):
        """``(|E|, 2)`` array of edges with ``i < j``, lexicographically sorted."""
        indptr, indices = self.indptr, self.indices
        src = np.repeat(np.arange(self.n, dtype=np.int64), np.diff(indptr))
        keep = src < indices
        return np.column_stack([src[keep], indices[keep]])

    def arcs(self):
        """Source/target arrays covering every edge in both directions."""
        indptr = self.indptr
        src = np.repeat(np.arange(self.n, dtype=np.int64), np.diff(indptr))
        return src, self.indices

    def copy(self):
        return Graph(self.n, self.indptr.copy(), self.indices.copy())

    def __repr__(self):
        return f"Graph(n={self.n}, m={self._m})"

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
        )

    # -- write side ----------------------------------------------------------

    def adjacency_lists(self):
        """Mutable per-node sorted lists; switches the graph to mutable mode."""
        if self._adj is None:
            ip, ix = self._indptr, self._indices.tolist()
            self._adj = [ix[ip[i]:ip[i + 1]] for i in range(self.n)]
        self._indptr = self._indices = None
        return self._adj

    def add_edge(self, i, j):
        """Add ``{i, j}``; return False if it already exists."""
        self._check(i)
        self._check(j)
        if i == j:
            raise ValueError(f"self-loop ({i}, {i}) not allowed")
        adj = self.adjacency_lists()
        a = adj[i]
        p = bisect.bisect_left(a, j)
        if p < len(a) and a[p] == j:
            return False
        a.insert(p, j)
        bisect.insort(adj[j], i)
        self._m += 1
        return True

    def remove_edge(self, i, j):
        """Remove ``{i, j}``; return False if it is absent."""
        self._check(i)
        self._check(j)
        if i == j:
            return False
        adj = self.adjacency_lists()
        a = adj[i]
        p = bisect.bisect_left(a, j)
        if p == len(a) or a[p] != j:
            return False
        del a[p]
        b = adj[j]
        del b[bisect.bisect_left(b, i)]
        self._m -= 1
        return True

    def _check(self, i):
        if not 0 <= i < self.n:
            raise IndexError(f"node {i} out of range [0, {self.n})")


def _canonical_pairs(arr):
    lo = np.minimum(arr[:, 0], arr[:, 1])
    hi = np.maximum(arr[:, 0], arr[:, 1])
    keep = lo != hi
    lo, hi = lo[keep], hi[keep]
    if lo.size == 0:
        return lo, hi
    packed = np.unique(lo.astype(np.uint64) << np.uint64(32) | hi.astype(np.uint64))
    return (
        (packed >> np.uint64(32)).astype(np.int64),
        (packed & np.uint64(0xFFFFFFFF)).astype(np.int64),
    )


def average_degree(g):
    """Mean degree ``2|E| / |V|``."""
    if g.n == 0:
        raise ValueError("average degree of an empty graph is undefined")
    return 2.0 * g.num_edges / g.n


def common_neighbor_count(g, i, j):
    """Size of ``N(i) & N(j)`` by a linear merge of the sorted neighbor rows."""
    a, b = g.neighbors(i), g.neighbors(j)
    p = q = c = 0
    na, nb = len(a), len(b)
    while p < na and q < nb:
        if a[p] < b[q]:
            p += 1
        elif a[p] > b[q]:
            q += 1
        else:
            c += 1
            p += 1
            q += 1
    return c


# -- edge-list ingestion ---------------------------------------------------------


@dataclass
class BuildReport:
    """What ingestion dropped, plus the external-to-internal id map."""

    lines: int = 0
    edges_read: int = 0
    self_loops: int = 0
    duplicates: int = 0
    external_ids: list = field(default_factory=list)

    def id_map(self):
        return {ext: k for k, ext in enumerate(self.external_ids)}


def _open_text(source):
    if isinstance(source, (str, os.PathLike)):
        return open(source, "r", encoding="utf-8"), True
    if isinstance(source, io.TextIOBase) or hasattr(source, "read"):
        return source, False
    # an iterable of lines
    return iter(source), False


_CHUNK = 1 << 20


class _IdCollector:
    """Accumulates endpoint tokens in bounded chunks.

    Integer ids are kept as int64 arrays and later mapped by numeric rank, so
    an edge list of internal ids reads back unchanged. The first non-integer
    token switches to string ids mapped in first-appearance order.
    """

    def __init__(self):
        self.int_chunks = []
        self.str_tokens = None
        self.pending = []

    def add(self, a, b):
        self.pending.append(a)
        self.pending.append(b)
        if len(self.pending) >= _CHUNK:
            self.flush()

    def flush(self):
        if not self.pending:
            return
        if self.str_tokens is None:
            try:
                self.int_chunks.append(np.array(self.pending).astype(np.int64))
            except ValueError:
                self.str_tokens = [str(v) for c in self.int_chunks for v in c.tolist()]
                self.int_chunks = []
        if self.str_tokens is not None:
            self.str_tokens.extend(self.pending)
        self.pending = []

    def remap(self, declared_n):
        self.flush()
        if self.str_tokens is None:
            flat = (
                np.concatenate(self.int_chunks) if self.int_chunks else np.zeros(0, np.int64)
            )
            extra = np.arange(declared_n, dtype=np.int64)
            ids, inverse = np.unique(np.concatenate([extra, flat]), return_inverse=True)
            return ids.tolist(), inverse[declared_n:].astype(np.int64)
        index = {}
        for t in self.str_tokens:
            if t not in index:
                index[t] = len(index)
        flat = np.fromiter(
            (index[t] for t in self.str_tokens), dtype=np.int64, count=len(self.str_tokens)
        )
        return list(index), flat


def build_graph(source, header=None):
    """Parse a whitespace- or comma-separated edge list into a :class:`Graph`.

    Lines starting with ``#`` or ``%`` are skipped. A ``# nodes: N`` line
    declares integer ids ``0..N-1`` so isolated nodes survive a round trip.
    With ``header=None`` a non-numeric first data line is skipped as a header
    when the line after it is numeric; string-id files with a header need
    ``header=True``.

    Returns
    -------
    graph : Graph
    report : BuildReport
    """
    fh, owned = _open_text(source)
    ids = _IdCollector()
    declared_n = 0
    report = BuildReport()
    # (lineno, parts) of the first data line while its header status is open
    pending = None
    n_data = 0

    def take(lineno, parts, line):
        if len(parts) < 2 or not parts[1]:
            raise EdgeListError(f"line {lineno}: expected two node ids, got {line!r}")
        ids.add(parts[0], parts[1])

    try:
        for lineno, raw in enumerate(fh, start=1):
            report.lines = lineno
            line = raw.strip()
            if not line:
                continue
            if line.startswith(_COMMENT_PREFIXES):
                m = _NODES_DIRECTIVE.match(line)
                if m:
                    declared_n = max(declared_n, int(m.group(1)))
                continue
            parts = _SPLIT.split(line)
            n_data += 1
            if n_data == 1:
                if header is None and not _numeric_pair(parts):
                    # a header only if the next data line turns out numeric
                    pending = (lineno, parts, line)
                elif not header:
                    take(lineno, parts, line)
                continue
            if pending is not None:
                if not _numeric_pair(parts):
                    take(*pending)
                pending = None
            take(lineno, parts, line)
        if pending is not None:
            take(*pending)
    finally:
        if owned:
            fh.close()

    external, flat = ids.remap(declared_n)
    if flat.size == 0 and declared_n == 0:
        raise EdgeListError("edge list is empty")
    arr = flat.reshape(-1, 2)
    report.edges_read = len(arr)
    report.self_loops = int(np.count_nonzero(arr[:, 0] == arr[:, 1]))
    lo, hi = _canonical_pairs(arr)
    report.duplicates = report.edges_read - report.self_loops - int(lo.size)
    report.external_ids = external
    if report.self_loops or report.duplicates:
        log.info(
            "dropped %d self-loops and %d duplicate edges", report.self_loops, report.duplicates
        )
    return Graph._from_canonical(len(external), lo, hi), report


def _numeric_pair(parts):
    return all(_looks_numeric(p) for p in parts[:2])


def _looks_numeric(tok):
    try:
        float(tok)
    except ValueError:
        return False
    return True


def write_edge_list(g, path):
    """Write ``i j`` lines (``i < j``, sorted) behind a ``# nodes: N`` header."""
    e = g.edges()
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"# nodes: {g.n}\n")
        fh.write(f"# edges: {len(e)}\n")
        if len(e):
            np.savetxt(fh, e, fmt="%d", delimiter=" ")


def write_id_map(report, path):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["external_id", "internal_id"])
        for k, ext in enumerate(report.external_ids):
            w.writerow([ext, k])
