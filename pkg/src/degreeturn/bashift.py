"""Preferential-attachment seeds and degree-constrained tie evolution.

Each time unit runs three phases in order:

1. triadic closure: pick ``i`` with weight ``k(k-1) f(k)``, join two random
   neighbors of ``i``;
2. tie decay: pick ``q`` with weight ``k + 1``, drop one of its ties;
3. random linkage: join a uniformly random pair.

Phase trial counts are ``c/2 * sum k(k-1)``, ``d/2 * sum k`` and ``n r``,
realized by stochastic rounding. Every trial is consumed whether or not it
changes the graph. Selection weights are snapshotted at the start of each
phase unless ``live_weights`` is set.
"""
from __future__ import annotations

import bisect
import csv
import logging
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .graph import Graph

log = logging.getLogger(__name__)

_EXP_GUARD = 700.0


@dataclass(frozen=True)
class ModelParams:
    n: int
    k_avg_max: float
    c: float
    d: float
    r: float
    beta: float
    k_T: float
    seed: int = 0
    max_units: int = 1_000_000
    m: int = 2
    live_weights: bool = False
    # closure acts only at nodes with more than two neighbors by default
    min_closure_degree: int = 3

    def __post_init__(self):
        errs = []
        if self.n < 3:
            errs.append("n must be at least 3")
        if not self.k_avg_max < self.n - 1:
            errs.append("k_avg_max must be below n - 1")
        if min(self.c, self.d, self.r) < 0:
            errs.append("c, d, r must be nonnegative")
        if not self.beta > 0:
            errs.append("beta must be positive")
        if self.k_T < 1:
            errs.append("k_T must be at least 1")
        if self.max_units < 1:
            errs.append("max_units must be at least 1")
        if not 1 <= self.m < self.n:
            errs.append("m must satisfy 1 <= m < n")
        if self.min_closure_degree < 2:
            errs.append("min_closure_degree must be at least 2")
        if errs:
            raise ValueError("; ".join(errs))

    @classmethod
    def parse(cls, text, **kw):
        """From ``n,kavg,c,d,r,beta,kT``."""
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 7:
            raise ValueError(f"expected 7 comma-separated values, got {len(parts)}")
        n, kavg, c, d, r, beta, kt = parts
        return cls(int(n), float(kavg), float(c), float(d), float(r), float(beta), float(kt), **kw)

    def label(self):
        return f"growth({self.n},{self.k_avg_max:g},{self.c:g},{self.d:g},{self.r:g},{self.beta:g},{self.k_T:g})"


@dataclass
class EvolutionLog:
    unit: list = field(default_factory=list)
    trials1: list = field(default_factory=list)
    added1: list = field(default_factory=list)
    trials2: list = field(default_factory=list)
    removed2: list = field(default_factory=list)
    trials3: list = field(default_factory=list)
    added3: list = field(default_factory=list)
    avg_degree: list = field(default_factory=list)
    initial_avg_degree: float = 0.0
    stop_reason: str = ""

    @property
    def converged(self):
        return self.stop_reason == "target"

    def record(self, unit, t1, a1, t2, r2, t3, a3, kavg):
        self.unit.append(unit)
        self.trials1.append(t1)
        self.added1.append(a1)
        self.trials2.append(t2)
        self.removed2.append(r2)
        self.trials3.append(t3)
        self.added3.append(a3)
        self.avg_degree.append(kavg)

    def write_csv(self, path):
        with open(path, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["unit", "added1", "removed2", "added3", "avg_degree"])
            for row in zip(self.unit, self.added1, self.removed2, self.added3, self.avg_degree):
                w.writerow([row[0], row[1], row[2], row[3], repr(row[4])])


def constraint_factor(k, beta, k_T):
    """Fermi switch ``1 / (exp(beta (k - k_T)) + 1)``; scalar or array.

    Exactly 0 above ``beta (k - k_T) > 700`` and 1 below ``-700``.
    """
    z = beta * (np.asarray(k, dtype=np.float64) - k_T)
    out = 1.0 / (np.exp(np.clip(z, -_EXP_GUARD, _EXP_GUARD)) + 1.0)
    out = np.where(z > _EXP_GUARD, 0.0, np.where(z < -_EXP_GUARD, 1.0, out))
    return float(out) if out.ndim == 0 else out


def closure_weights(deg, beta, k_T):
    deg = np.asarray(deg, dtype=np.float64)
    return deg * (deg - 1.0) * constraint_factor(deg, beta, k_T)


def decay_weights(deg):
    return np.asarray(deg, dtype=np.float64) + 1.0


def stochastic_round(x, rng):
    """``floor(x)`` plus one with probability ``frac(x)``."""
    base = math.floor(x)
    return int(base) + int(rng.random() < x - base)


def weighted_choice(weights, size, rng):
    """Inverse-CDF draws of indices proportional to ``weights``; zero weights never drawn."""
    cum = np.cumsum(weights)
    return np.searchsorted(cum, rng.random(size) * cum[-1], side="right")


def _rng(seed):
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def generate_ba(n, m, seed=None):
    """Preferential-attachment graph.

    Starts from a complete graph on ``m + 1`` nodes; every later node links to
    ``m`` distinct earlier nodes drawn proportionally to degree, redrawing on
    collision. ``|E| = m(m+1)/2 + (n - m - 1) m``.
    """
    if not (isinstance(m, (int, np.integer)) and isinstance(n, (int, np.integer))):
        raise TypeError("n and m must be integers")
    if m < 1 or m >= n:
        raise ValueError(f"need 1 <= m < n, got n={n}, m={m}")
    rng = _rng(seed)
    edges = [(a, b) for a in range(m + 1) for b in range(a + 1, m + 1)]
    # each node repeated once per incident edge end
    ends = [v for e in edges for v in e]
    for v in range(m + 1, n):
        chosen = set()
        while len(chosen) < m:
            chosen.add(ends[int(rng.random() * len(ends))])
        for t in sorted(chosen):
            edges.append((t, v))
            ends.append(t)
            ends.append(v)
    return Graph.from_edges(n, edges)


class _Fenwick:
    """Prefix-sum tree for live-updated weighted sampling."""

    def __init__(self, weights):
        self.n = len(weights)
        tree = np.zeros(self.n + 1)
        tree[1:] = weights
        for i in range(1, self.n + 1):
            j = i + (i & -i)
            if j <= self.n:
                tree[j] += tree[i]
        self.tree = tree.tolist()
        self.weights = list(map(float, weights))
        self.top = 1 << (self.n.bit_length() - 1) if self.n else 0

    def total(self):
        s, i = 0.0, self.n
        while i > 0:
            s += self.tree[i]
            i -= i & -i
        return s

    def set(self, idx, w):
        delta = w - self.weights[idx]
        if delta == 0.0:
            return
        self.weights[idx] = w
        i = idx + 1
        while i <= self.n:
            self.tree[i] += delta
            i += i & -i

    def find(self, u):
        """Smallest index whose prefix sum exceeds ``u``."""
        pos, step = 0, self.top
        tree = self.tree
        while step:
            nxt = pos + step
            if nxt <= self.n and tree[nxt] <= u:
                pos = nxt
                u -= tree[nxt]
            step >>= 1
        return min(pos, self.n - 1)


class Simulation:
    """Mutable evolution state; :func:`evolve` drives it to completion."""

    def __init__(self, params, graph=None):
        self.params = params
        self.rng = np.random.default_rng(params.seed)
        self.graph = graph if graph is not None else generate_ba(params.n, params.m, self.rng)
        self.adj = self.graph.adjacency_lists()
        self.deg = np.fromiter((len(a) for a in self.adj), dtype=np.int64, count=self.graph.n)
        self.log = EvolutionLog(initial_avg_degree=self.avg_degree)

    @property
    def avg_degree(self):
        return 2.0 * self.graph.num_edges / self.graph.n

    def _link(self, x, y):
        a = self.adj[x]
        p = bisect.bisect_left(a, y)
        if p < len(a) and a[p] == y:
            return False
        a.insert(p, y)
        bisect.insort(self.adj[y], x)
        self.deg[x] += 1
        self.deg[y] += 1
        self.graph._m += 1
        return True

    def _unlink(self, x, y):
        a = self.adj[x]
        del a[bisect.bisect_left(a, y)]
        b = self.adj[y]
        del b[bisect.bisect_left(b, x)]
        self.deg[x] -= 1
        self.deg[y] -= 1
        self.graph._m -= 1

    def _close_at(self, i, u0, u1):
        """Join two random neighbors of ``i``; return the pair if a tie was added."""
        a = self.adj[i]
        k = len(a)
        if k < self.params.min_closure_degree:
            return None
        p = int(u0 * k)
        q = int(u1 * (k - 1))
        if q >= p:
            q += 1
        x, y = a[p], a[q]
        return (x, y) if self._link(x, y) else None

    def _decay_at(self, qn, u):
        a = self.adj[qn]
        k = len(a)
        if k <= 1:
            return None
        j = a[int(u * k)]
        self._unlink(qn, j)
        return (qn, j)

    def action1_close_triads(self):
        """Returns ``(trials, added)``."""
        p = self.params
        deg = self.deg.astype(np.float64)
        trials = stochastic_round(0.5 * p.c * float((deg * (deg - 1.0)).sum()), self.rng)
        if trials == 0:
            return 0, 0
        w = closure_weights(deg, p.beta, p.k_T)
        if not w.sum() > 0:
            log.debug("closure phase skipped: all selection weights are zero")
            return trials, 0
        if p.live_weights:
            return trials, self._live_phase(
                w, trials, lambda d: float(d * (d - 1)) * constraint_factor(d, p.beta, p.k_T),
                self._close_at, 2,
            )
        sel = weighted_choice(w, trials, self.rng).tolist()
        u = self.rng.random((trials, 2)).tolist()
        added = 0
        for i, (u0, u1) in zip(sel, u):
            added += self._close_at(i, u0, u1) is not None
        return trials, added

    def action2_decay_ties(self):
        """Returns ``(trials, removed)``."""
        trials = stochastic_round(0.5 * self.params.d * float(self.deg.sum()), self.rng)
        if trials == 0:
            return 0, 0
        w = decay_weights(self.deg)
        if self.params.live_weights:
            return trials, self._live_phase(w, trials, lambda d: d + 1.0, self._decay_at, 1)
        sel = weighted_choice(w, trials, self.rng).tolist()
        u = self.rng.random(trials).tolist()
        removed = 0
        for qn, uu in zip(sel, u):
            removed += self._decay_at(qn, uu) is not None
        return trials, removed

    def action3_random_link(self):
        """Returns ``(trials, added)``."""
        n = self.graph.n
        trials = stochastic_round(n * self.params.r, self.rng)
        if trials == 0:
            return 0, 0
        u = self.rng.random((trials, 2)).tolist()
        added = 0
        for u0, u1 in u:
            i = int(u0 * n)
            j = int(u1 * (n - 1))
            if j >= i:
                j += 1
            added += self._link(i, j)
        return trials, added

    def _live_phase(self, w, trials, weight_of, act, n_uniform):
        tree = _Fenwick(w)
        changed = 0
        for _ in range(trials):
            total = tree.total()
            if not total > 0:
                break
            i = tree.find(self.rng.random() * total)
            pair = act(i, *self.rng.random(n_uniform).tolist())
            if pair is not None:
                changed += 1
                for v in pair:
                    tree.set(v, weight_of(float(self.deg[v])))
        return changed

    def step(self, unit):
        t1, a1 = self.action1_close_triads()
        t2, r2 = self.action2_decay_ties()
        t3, a3 = self.action3_random_link()
        self.log.record(unit, t1, a1, t2, r2, t3, a3, self.avg_degree)
        return t1 + t2 + t3

    def run(self):
        p = self.params
        for unit in range(1, p.max_units + 1):
            self.step(unit)
            if self.avg_degree >= p.k_avg_max:
                self.log.stop_reason = "target"
                break
            if p.c == 0 and p.d == 0 and p.r == 0:
                # no action can ever fire
                self.log.stop_reason = "stalled"
                log.warning("c = d = r = 0: graph cannot change, stopping after one unit")
                break
            if unit % 1000 == 0:
                log.info("unit %d: <k> = %.4f, |E| = %d", unit, self.avg_degree, self.graph.num_edges)
        else:
            self.log.stop_reason = "max_units"
            log.warning(
                "stopped at max_units=%d with <k> = %.4f below target %.4f",
                p.max_units, self.avg_degree, p.k_avg_max,
            )
        return self.graph, self.log


def evolve(params):
    """Seed a BA graph and evolve it until ``<k>`` reaches ``params.k_avg_max``.

    Returns the final :class:`~degreeturn.graph.Graph` and its
    :class:`EvolutionLog`; ``log.stop_reason`` is ``"target"``,
    ``"max_units"`` or ``"stalled"``.
    """
    return Simulation(params).run()


def params_dict(params):
    return asdict(params)
