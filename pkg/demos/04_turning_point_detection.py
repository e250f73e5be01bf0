"""
Finding a turning point in a degree curve
=========================================

A two-line fit is tried at every observed degree inside the search window;
the break counts when it cuts the squared error of a single line by at
least 20%.
"""
import numpy as np

from degreeturn import DegreeCurve, break_consensus, detect_break

rng = np.random.default_rng(0)
k = np.arange(10, 1001)
ones = np.ones(k.size, dtype=int)

# flat up to 200, then decaying as a power law, with 1% noise
y = np.where(k <= 200, 0.3, 0.3 * (k / 200.0) ** -1.5) * (1 + 0.01 * rng.standard_normal(k.size))
bent = detect_break(DegreeCurve.exact(k, y, ones), "log-log", name="bent")
print(bent)

# a single power law has nothing to find
straight = detect_break(DegreeCurve.exact(k, k ** -1.0, ones), "log-log", name="straight")
print(f"straight: ratio {straight.improvement_ratio:.3f}, significant={straight.significant}")

# a flat line is degenerate and reported as such
flat = detect_break(DegreeCurve.exact(k, np.full(k.size, 0.3), ones), name="flat")
print(f"flat: significant={flat.significant}, slopes {flat.left_slope}, {flat.right_slope}")

###############################################################################
# Several curves vote through the median of their significant breaks.

print(break_consensus([bent, straight, flat]))
