"""
Homophily and interaction curves
================================

Profile similarity between friends, wall-post activity, and send/receive
reciprocation, each as a function of degree. The data here are synthetic:
profiles drift with degree so the curve has something to show.
"""
import numpy as np

from degreeturn import generate_ba
from degreeturn.attributes import AttributeTable, homophily_curve, homophily_distance
from degreeturn.interactions import (
    ExchangeLedger, WallLedger, activity_curve, reciprocation_curve,
)

rng = np.random.default_rng(1)
g = generate_ba(3000, 3, seed=1)
deg = g.degrees

# seven categorical codes per node; high-degree nodes get noisier profiles
noise = np.clip(deg / deg.max() * 3, 0, 0.9)
base = rng.integers(1, 4, size=(g.n, 7))
scramble = rng.random((g.n, 7)) < noise[:, None]
codes = np.where(scramble, rng.integers(1, 20, size=(g.n, 7)), base)
table = AttributeTable(codes)
print("d(0, 1) =", homophily_distance(table, 0, 1))

hk = homophily_curve(g, table)
print("H(k) at low / high degree:", hk.mean[:3].round(3), hk.mean[-3:].round(3))

###############################################################################
# Wall posts land on the owner's wall; L(k) counts received posts by default.

posts = rng.poisson(np.minimum(deg, 40))
owner = np.repeat(np.arange(g.n), posts)
poster = rng.integers(0, g.n, owner.size)
wall = WallLedger(poster, owner, np.zeros(owner.size, dtype=np.int64))
lk = activity_curve(g, wall)
print(f"{len(wall)} posts; L(k) for k = {lk.k[:4]} -> {lk.mean[:4].round(2)}")

###############################################################################
# Reciprocation r_i = received / sent; nodes that never sent are left out.

sent = rng.poisson(2.0, g.n)
received = rng.binomial(sent * 2, 0.5)
ex = ExchangeLedger(sent, received)
rk = reciprocation_curve(g, ex)
print(f"r(k) covers {rk.count.sum()} of {g.n} nodes; overall mean {np.average(rk.mean, weights=rk.count):.3f}")
