"""Two-segment break detection on degree curves."""
from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass

import numpy as np

from ._kernels import split_fits

log = logging.getLogger(__name__)

DEFAULT_RANGE = (50, 1000)
DEFAULT_THRESHOLD = 1.2
MIN_POINTS = 8
MIN_SEGMENT = 3

# how each named curve is usually drawn
DEFAULT_TRANSFORMS = {
    "ccdf": "log-log",
    "lk": "log-log",
    "ck": "log-x",
    "knn": "log-x",
    "knn_norm": "log-x",
    "wk": "log-x",
    "hk": "log-x",
    "rk": "log-x",
    "ks": "log-x",
}


class DetectionError(ValueError):
    pass


@dataclass
class BreakReport:
    k_T: float
    improvement_ratio: float
    left_slope: float
    right_slope: float
    significant: bool
    name: str = ""


@dataclass
class Consensus:
    found: bool
    median: float = math.nan
    k_lo: float = math.nan
    k_hi: float = math.nan
    n_significant: int = 0


def _line_sse(x, y, w):
    sw = w.sum()
    mx = (w * x).sum() / sw
    my = (w * y).sum() / sw
    dx = x - mx
    sxx = (w * dx * dx).sum()
    slope = (w * dx * (y - my)).sum() / sxx if sxx > 0 else 0.0
    r = y - my - slope * dx
    return float((w * r * r).sum()), float(slope)


def _prepare(curve, transform, search_range):
    if transform not in ("log-x", "log-log"):
        raise ValueError(f"unknown transform {transform!r}")
    k = np.asarray(curve.k, dtype=np.float64)
    y = np.asarray(curve.mean, dtype=np.float64)
    w = np.asarray(curve.count, dtype=np.float64)
    lo, hi = search_range
    keep = (k >= max(lo, 1)) & (k <= hi) & np.isfinite(y)
    if transform == "log-log":
        bad = keep & (y <= 0)
        if bad.any():
            log.warning("dropping %d nonpositive points before log-log fit", int(bad.sum()))
        keep &= y > 0
    k, y, w = k[keep], y[keep], w[keep]
    order = np.argsort(k, kind="stable")
    k, y, w = k[order], y[order], w[order]
    if k.size < MIN_POINTS:
        raise DetectionError(
            f"need at least {MIN_POINTS} curve points in [{lo}, {hi}], got {k.size}"
        )
    x = np.log10(k)
    if transform == "log-log":
        y = np.log10(y)
    return k, x, y, w


def detect_break(curve, transform="log-x", search_range=DEFAULT_RANGE,
                 threshold=DEFAULT_THRESHOLD, name=""):
    """Best single breakpoint of a two-line fit over the points in ``search_range``.

    Every observed degree leaving at least ``MIN_SEGMENT`` points on each side
    is tried; each side gets its own count-weighted least-squares line in the
    transformed coordinates (``log10 k`` against ``y`` or ``log10 y``). The
    break is significant when the one-line SSE is at least ``threshold`` times
    the best two-line SSE. Among equally good breakpoints the largest wins.
    """
    k, x, y, w = _prepare(curve, transform, search_range)
    single, slope = _line_sse(x, y, w)
    if np.ptp(y) == 0.0:
        mid = k[k.size // 2]
        return BreakReport(float(mid), 1.0, 0.0, 0.0, False, name)

    bs, sses, sls, srs = split_fits(x, y, w, MIN_SEGMENT)
    tol = 1e-12 * max(single, np.finfo(float).tiny)
    # ties go to the largest breakpoint
    t = np.flatnonzero(sses <= sses.min() + tol)[-1]
    total, b, sl, sr = float(sses[t]), int(bs[t]), float(sls[t]), float(srs[t])
    if total > 0:
        ratio = single / total
    else:
        ratio = math.inf if single > 0 else 1.0
    return BreakReport(float(k[b - 1]), float(ratio), sl, sr, bool(ratio >= threshold), name)


def break_consensus(reports):
    """Median and spread of the significant breakpoints."""
    ks = [r.k_T for r in reports if r.significant]
    if not ks:
        return Consensus(found=False)
    return Consensus(True, float(np.median(ks)), float(min(ks)), float(max(ks)), len(ks))


def weighted_slope(curve, k_range, transform="log-x"):
    """Count-weighted least-squares slope of the curve over ``k_range``."""
    k, x, y, w = _prepare(curve, transform, k_range)
    return _line_sse(x, y, w)[1]


_FIELDS = ["curve_name", "k_T", "improvement_ratio", "left_slope", "right_slope", "significant"]


def write_breaks(reports, path, consensus=None):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        wr = csv.writer(fh, lineterminator="\n")
        wr.writerow(_FIELDS)
        for r in reports:
            wr.writerow([
                r.name, repr(r.k_T), repr(r.improvement_ratio),
                repr(r.left_slope), repr(r.right_slope), str(r.significant).lower(),
            ])
        if consensus is not None:
            # consensus row: median break, spread in the slope columns
            wr.writerow([
                "consensus", repr(consensus.median), consensus.n_significant,
                repr(consensus.k_lo), repr(consensus.k_hi), str(consensus.found).lower(),
            ])


def read_breaks(path):
    with open(path, "r", encoding="utf-8", newline="") as fh:
        rows = list(csv.DictReader(fh))
    out = []
    for r in rows:
        if r["curve_name"] == "consensus":
            continue
        out.append(BreakReport(
            float(r["k_T"]), float(r["improvement_ratio"]), float(r["left_slope"]),
            float(r["right_slope"]), r["significant"] == "true", r["curve_name"],
        ))
    return out
