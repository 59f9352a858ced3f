"""Polyline geometry used to verify branch structure in parametric panels."""

from __future__ import annotations

import numpy as np


def _orient(ox, oy, ax, ay, bx, by):
    return (ax - ox) * (by - oy) - (ay - oy) * (bx - ox)


def _segments_cross(p1, p2, p3, p4) -> bool:
    """Proper intersection of open segments (shared endpoints excluded)."""
    d1 = _orient(*p3, *p4, *p1)
    d2 = _orient(*p3, *p4, *p2)
    d3 = _orient(*p1, *p2, *p3)
    d4 = _orient(*p1, *p2, *p4)
    return ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0)) \
        and d1 != 0 and d2 != 0 and d3 != 0 and d4 != 0


def polyline_self_intersections(x, y) -> int:
    """Count proper crossings between non-adjacent segments of a polyline.

    A parametric (p, P) curve with coexisting branches re-enters regions it
    already visited, so its polyline self-intersects; a single-valued curve
    traced back and forth does not (retracing overlaps but never crosses).
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n = x.size - 1
    count = 0
    for i in range(n):
        for j in range(i + 2, n):
            p1, p2 = (x[i], y[i]), (x[i + 1], y[i + 1])
            p3, p4 = (x[j], y[j]), (x[j + 1], y[j + 1])
            if _segments_cross(p1, p2, p3, p4):
                count += 1
    return count
