"""Shared generators and brute-force oracles.

Every oracle here recomputes its quantity from raw data by direct
enumeration or dense grid evaluation, deliberately bypassing the
library's closed forms and bisections so the two routes stay
independent.
"""

import math

import numpy as np
import pytest

from dfmest.convex import ConvexFn, PiecewiseLinearConvex


def random_pwl_data(rng, max_breaks=5, slope_scale=4.0, span=3.0, interior_min=False):
    """Random convex piecewise-linear data: sorted breakpoints with values
    accumulated from a sorted slope sequence.

    Returns (breakpoints, left_slope, right_slope) as plain floats; with
    ``interior_min`` the tail slopes are forced to opposite signs so the
    minimum is attained inside the breakpoint span.
    """
    k = int(rng.integers(1, max_breaks + 1))
    xs = np.unique(np.round(rng.uniform(-span, span, size=k), 5))
    k = len(xs)
    slopes = np.sort(rng.uniform(-slope_scale, slope_scale, size=k + 1))
    if interior_min:
        slopes[0] = -abs(slopes[0]) - 0.25
        slopes[-1] = abs(slopes[-1]) + 0.25
        slopes = np.sort(slopes)
    v = float(rng.uniform(-1.0, 1.0))
    breaks = [(float(xs[0]), v)]
    for i in range(1, k):
        v += float(slopes[i]) * float(xs[i] - xs[i - 1])
        breaks.append((float(xs[i]), v))
    return tuple(breaks), float(slopes[0]), float(slopes[-1])


def random_pwl(rng, **kw):
    breaks, ls, rs = random_pwl_data(rng, **kw)
    return PiecewiseLinearConvex(breaks, ls, rs)


def pwl_oracle_values(breaks, left_slope, right_slope, xs):
    """Evaluate piecewise-linear data on a grid with plain numpy
    interpolation plus explicit tail extensions."""
    bx = np.array([b[0] for b in breaks], dtype=float)
    bv = np.array([b[1] for b in breaks], dtype=float)
    xs = np.asarray(xs, dtype=float)
    vals = np.interp(xs, bx, bv)
    left = xs < bx[0]
    right = xs > bx[-1]
    vals[left] = bv[0] + left_slope * (xs[left] - bx[0])
    vals[right] = bv[-1] + right_slope * (xs[right] - bx[-1])
    return vals


def grid_values(f, lo, hi, m=10001):
    """Dense evaluation of a ConvexFn; +inf where the value is infinite."""
    xs = np.linspace(lo, hi, m)
    vals = np.empty(m)
    for i, x in enumerate(xs):
        v = f(float(x))
        vals[i] = float(v) if v.finite else math.inf
    return xs, vals


def grid_dopt(vals0, vals1, cap=1e9):
    """Separation threshold on a shared grid: the supremum delta at which
    the strict sublevel index sets stay disjoint, found by doubling plus
    bisection on delta."""
    m0, m1 = float(np.min(vals0)), float(np.min(vals1))

    def disjoint(d):
        return not np.any((vals0 < m0 + d) & (vals1 < m1 + d))

    if not disjoint(1e-12):
        return 0.0
    hi = 1e-6
    while disjoint(hi):
        hi *= 2.0
        if hi > cap:
            return math.inf
    lo = hi / 2.0
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if disjoint(mid):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def grid_argmin_interval(xs, vals, tol=1e-12):
    """Grid bracket of the argmin set: (lo, hi) of points within tol of
    the grid minimum."""
    m = float(np.min(vals))
    hit = np.flatnonzero(vals <= m + tol)
    return float(xs[hit[0]]), float(xs[hit[-1]])


def pwl_integral_of_slope(f, a, b):
    """Integral of dplus over [a, b] for a piecewise-linear ConvexFn via
    midpoint quadrature on the segments between breakpoints (exact for
    step-function derivatives)."""
    knots = [a] + [x for x, _ in f.pwl.breakpoints if a < x < b] + [b]
    total = 0.0
    for lo, hi in zip(knots, knots[1:]):
        mid = 0.5 * (lo + hi)
        total += float(f.dplus(mid)) * (hi - lo)
    return total


@pytest.fixture
def rng():
    return np.random.default_rng(20260814)
