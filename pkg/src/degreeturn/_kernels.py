"""Compiled inner loops over CSR adjacency.

Parallel loops write each output slot exactly once, so results do not
depend on the thread count.
"""
import numba
import numpy as np
from numba import njit, prange

# the bundled TBB is often too old; try OpenMP first
numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]


def set_threads(n):
    """Set worker threads for the parallel kernels; ``None`` keeps the default."""
    if n is not None:
        numba.set_num_threads(max(1, min(int(n), numba.config.NUMBA_NUM_THREADS)))


@njit(cache=True, nogil=True)
def _find(indices, lo, hi, x):
    while lo < hi:
        mid = (lo + hi) >> 1
        if indices[mid] < x:
            lo = mid + 1
        else:
            hi = mid
    return lo


@njit(parallel=True, cache=True, nogil=True)
def arc_common_neighbors(indptr, indices):
    """|N(i) & N(j)| for every arc, aligned with ``indices``.

    Each edge is merged once (from its lower endpoint) and the result is
    mirrored into the reverse arc.
    """
    n = indptr.size - 1
    out = np.zeros(indices.size, dtype=np.int64)
    for i in prange(n):
        a0 = indptr[i]
        a1 = indptr[i + 1]
        for p in range(a0, a1):
            j = indices[p]
            if j < i:
                continue
            b0 = indptr[j]
            b1 = indptr[j + 1]
            x = a0
            y = b0
            c = 0
            while x < a1 and y < b1:
                u = indices[x]
                v = indices[y]
                if u < v:
                    x += 1
                elif u > v:
                    y += 1
                else:
                    c += 1
                    x += 1
                    y += 1
            out[p] = c
            out[_find(indices, b0, b1, i)] = c
    return out


@njit(cache=True, nogil=True)
def core_numbers(indptr, indices):
    """Batagelj-Zaversnik bucket peeling; O(|V| + |E|)."""
    n = indptr.size - 1
    deg = np.empty(n, dtype=np.int64)
    maxd = 0
    for v in range(n):
        deg[v] = indptr[v + 1] - indptr[v]
        if deg[v] > maxd:
            maxd = deg[v]
    bin_ = np.zeros(maxd + 1, dtype=np.int64)
    for v in range(n):
        bin_[deg[v]] += 1
    start = 0
    for d in range(maxd + 1):
        num = bin_[d]
        bin_[d] = start
        start += num
    pos = np.empty(n, dtype=np.int64)
    vert = np.empty(n, dtype=np.int64)
    for v in range(n):
        pos[v] = bin_[deg[v]]
        vert[pos[v]] = v
        bin_[deg[v]] += 1
    for d in range(maxd, 0, -1):
        bin_[d] = bin_[d - 1]
    bin_[0] = 0
    for i in range(n):
        v = vert[i]
        for p in range(indptr[v], indptr[v + 1]):
            u = indices[p]
            if deg[u] > deg[v]:
                du = deg[u]
                pu = pos[u]
                pw = bin_[du]
                w = vert[pw]
                if u != w:
                    pos[u] = pw
                    vert[pu] = w
                    pos[w] = pu
                    vert[pw] = u
                bin_[du] += 1
                deg[u] -= 1
    return deg


@njit(cache=True, nogil=True)
def _wls(x, y, w, a, b):
    sw = 0.0
    sx = 0.0
    sy = 0.0
    for t in range(a, b):
        sw += w[t]
        sx += w[t] * x[t]
        sy += w[t] * y[t]
    mx = sx / sw
    my = sy / sw
    sxx = 0.0
    sxy = 0.0
    for t in range(a, b):
        dx = x[t] - mx
        sxx += w[t] * dx * dx
        sxy += w[t] * dx * (y[t] - my)
    slope = sxy / sxx if sxx > 0 else 0.0
    sse = 0.0
    for t in range(a, b):
        r = y[t] - my - slope * (x[t] - mx)
        sse += w[t] * r * r
    return sse, slope


@njit(cache=True, nogil=True)
def split_fits(x, y, w, min_seg):
    """Two-line weighted fits for every split ``x[:b] | x[b:]``.

    Returns ``(b, sse_total, left_slope, right_slope)`` arrays over the
    splits leaving at least ``min_seg`` points per side. Residuals are
    summed directly (two passes per segment) so exact fits give SSE 0.
    """
    n = x.size
    m = max(n - 2 * min_seg + 1, 0)
    bs = np.empty(m, dtype=np.int64)
    tot = np.empty(m)
    sl = np.empty(m)
    sr = np.empty(m)
    for t in range(m):
        b = min_seg + t
        e1, s1 = _wls(x, y, w, 0, b)
        e2, s2 = _wls(x, y, w, b, n)
        bs[t] = b
        tot[t] = e1 + e2
        sl[t] = s1
        sr[t] = s2
    return bs, tot, sl, sr
