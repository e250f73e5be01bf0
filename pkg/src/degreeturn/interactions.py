"""Wall-post activity L(k) and send/receive reciprocation r(k)."""
from __future__ import annotations

import csv
import logging
import re
from dataclasses import dataclass, field

import numpy as np

from .curves import per_degree_curve

log = logging.getLogger(__name__)
_SPLIT = re.compile(r"[\s,]+")


@dataclass
class WallLedger:
    """Wall-post records as internal ids; ``skipped`` counts unresolvable rows."""

    poster: np.ndarray
    owner: np.ndarray
    timestamp: np.ndarray
    skipped: int = 0

    def __post_init__(self):
        self.poster = np.asarray(self.poster, dtype=np.int64)
        self.owner = np.asarray(self.owner, dtype=np.int64)
        self.timestamp = np.asarray(self.timestamp, dtype=np.int64)
        if not len(self.poster) == len(self.owner) == len(self.timestamp):
            raise ValueError("ledger columns differ in length")
        if np.any(self.timestamp < 0):
            raise ValueError("timestamps must be nonnegative")

    def __len__(self):
        return len(self.owner)

    @classmethod
    def read(cls, path, id_map):
        """Read ``poster owner timestamp`` rows (whitespace or comma separated).

        The timestamp column may be absent or ``\\N``; it is then taken as 0.
        """
        lookup = {str(k): v for k, v in id_map.items()}
        poster, owner, ts = [], [], []
        skipped = 0
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.strip()
                if not line or line.startswith(("#", "%")):
                    continue
                parts = _SPLIT.split(line)
                if lineno == 1 and not parts[0].lstrip("-").isdigit() and parts[0] not in lookup:
                    continue
                if len(parts) < 2:
                    raise ValueError(f"{path}:{lineno}: expected 'poster owner timestamp'")
                p, o = lookup.get(parts[0]), lookup.get(parts[1])
                if p is None or o is None:
                    skipped += 1
                    continue
                t = parts[2] if len(parts) > 2 else "0"
                poster.append(p)
                owner.append(o)
                ts.append(int(t) if t.isdigit() else 0)
        if skipped:
            log.warning("%s: skipped %d records with ids absent from the graph", path, skipped)
        return cls(poster, owner, ts, skipped)


@dataclass
class ExchangeLedger:
    """Per-node sent/received event counts (length ``|V|``)."""

    sent: np.ndarray
    received: np.ndarray
    skipped: int = field(default=0)

    def __post_init__(self):
        self.sent = np.asarray(self.sent, dtype=np.int64)
        self.received = np.asarray(self.received, dtype=np.int64)
        if self.sent.shape != self.received.shape:
            raise ValueError("sent and received differ in length")
        if np.any(self.sent < 0) or np.any(self.received < 0):
            raise ValueError("counts must be nonnegative")

    @classmethod
    def from_events(cls, sender, receiver, n):
        sent = np.bincount(np.asarray(sender, dtype=np.int64), minlength=n)
        received = np.bincount(np.asarray(receiver, dtype=np.int64), minlength=n)
        return cls(sent, received)

    @classmethod
    def read(cls, path, id_map, n):
        """Read ``node_id,sent,received`` counts or ``sender,receiver`` events.

        The layout is chosen from the header when present, otherwise from the
        column count of the first data row.
        """
        lookup = {str(k): v for k, v in id_map.items()}
        sent = np.zeros(n, dtype=np.int64)
        received = np.zeros(n, dtype=np.int64)
        skipped = 0
        layout = None
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.strip()
                if not line or line.startswith(("#", "%")):
                    continue
                parts = _SPLIT.split(line)
                if layout is None:
                    layout = "counts" if len(parts) >= 3 else "events"
                    if not parts[0].lstrip("-").isdigit() and parts[0] not in lookup:
                        continue
                if layout == "counts":
                    node = lookup.get(parts[0])
                    if node is None:
                        skipped += 1
                        continue
                    sent[node] += int(parts[1])
                    received[node] += int(parts[2])
                else:
                    if len(parts) < 2:
                        raise ValueError(f"{path}:{lineno}: expected 'sender receiver'")
                    a, b = lookup.get(parts[0]), lookup.get(parts[1])
                    if a is None or b is None:
                        skipped += 1
                        continue
                    sent[a] += 1
                    received[b] += 1
        if skipped:
            log.warning("%s: skipped %d rows with ids absent from the graph", path, skipped)
        return cls(sent, received, skipped)


def activity_strengths(w, n, poster_side=False, include_self=True):
    """Wall-list length per node: posts received (default) or written."""
    keep = np.ones(len(w), dtype=bool) if include_self else w.poster != w.owner
    ids = w.poster if poster_side else w.owner
    return np.bincount(ids[keep], minlength=n)


def activity_strength(w, i, poster_side=False, include_self=True):
    ids = w.poster if poster_side else w.owner
    mask = ids == i
    if not include_self:
        mask &= w.poster != w.owner
    return int(np.count_nonzero(mask))


def activity_curve(g, w, binning=None, poster_side=False, include_self=True):
    """L(k) over every graph node, zero-activity nodes included."""
    lengths = activity_strengths(w, g.n, poster_side, include_self)
    return per_degree_curve(g.degrees, lengths, binning)


def reciprocation(e, i):
    """``received / sent`` for node ``i``; None when it sent nothing."""
    s = int(e.sent[i])
    if s == 0:
        return None
    return int(e.received[i]) / s


def reciprocations(e):
    """Per-node ratios, NaN where undefined."""
    out = np.full(e.sent.shape, np.nan)
    np.divide(e.received, e.sent, out=out, where=e.sent > 0)
    return out


def reciprocation_curve(g, e, binning=None):
    """r(k) over nodes with at least one sent event."""
    if len(e.sent) != g.n:
        raise ValueError(f"exchange ledger has {len(e.sent)} rows for {g.n} nodes")
    r = reciprocations(e)
    return per_degree_curve(g.degrees, np.nan_to_num(r), binning, mask=e.sent > 0)
