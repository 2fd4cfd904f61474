"""Deterministic scalar minimization for piecewise-smooth energies.

The branch energies that show up in the jump optimizations are sums of a
convex bulk response and a concave surface cost: a handful of local
minima separated by known breakpoints (law kinks, saturation openings).
A dense vectorized grid finds every basin, exact breakpoint candidates
remove the kink error, and repeated grid bisection refines the smooth
minima; no derivatives are needed and ties resolve to the leftmost
point.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = ["line_search", "zoom"]


def zoom(fn, lo: float, hi: float, best, rounds: int = 2, n: int = 129):
    """Refine a bracketed minimum by repeated vectorized grid bisection."""
    best_x, best_v = best
    for _ in range(rounds):
        pts = np.linspace(lo, hi, n)
        vals = fn(pts)
        i = int(np.argmin(vals))
        if vals[i] < best_v:
            best_x, best_v = float(pts[i]), float(vals[i])
        lo = float(pts[max(i - 1, 0)])
        hi = float(pts[min(i + 1, n - 1)])
    return best_x, best_v


def line_search(fn, lo: float, hi: float, extras=(), n_grid: int = 257):
    """Minimize a piecewise-smooth scalar function on [lo, hi].

    ``fn`` must accept numpy arrays.  ``extras`` are breakpoints evaluated
    exactly, so only smooth interior minima need refinement; those are
    zoomed from the best few grid basins.
    """
    if hi <= lo:
        return lo, float(fn(np.array([lo]))[0])
    pts = np.linspace(lo, hi, n_grid)
    extras = [e for e in extras if lo < e < hi]
    if extras:
        pts = np.unique(np.concatenate([pts, np.asarray(extras, dtype=float)]))
    vals = fn(pts)
    interior = np.flatnonzero(
        (vals[1:-1] <= vals[:-2]) & (vals[1:-1] <= vals[2:])
    ) + 1
    candidates = {0, len(pts) - 1, int(np.argmin(vals)), *interior.tolist()}
    ranked = sorted(candidates, key=lambda i: vals[i])[:3]
    best_x, best_v = None, math.inf
    for i in ranked:
        a = float(pts[max(i - 1, 0)])
        b = float(pts[min(i + 1, len(pts) - 1)])
        x, v = zoom(fn, a, b, (float(pts[i]), float(vals[i])))
        if v < best_v:
            best_x, best_v = x, v
    return best_x, best_v
