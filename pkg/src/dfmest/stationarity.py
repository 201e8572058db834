"""Stationarity error of a convex function and the concentration
experiment showing empirical quantiles find near-stationary points of the
population pinball loss at a distribution-free rate.

The error at theta is the distance from zero to the subdifferential,
corrected by the smallest such distance anywhere (so monotone losses with
flattening tails still admit vanishing error).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

from .convex import ConvexFn, SEARCH_WINDOW, minimize
from .errors import ConfigurationError, ParameterError
from .estimators import empirical_quantile
from .extreal import INF, NEG_INF, ext
from .families import LossFamily
from .separation import DiscreteDist

__all__ = [
    "StationarityResult",
    "stationarity_error",
    "g_min_oracle",
    "quantile_coverage",
    "UniformSampler",
    "concentration_experiment",
]


@dataclass(frozen=True)
class StationarityResult:
    """A fitted point with its stationarity error and the correction term;
    for quantile losses the CDF bracket at the point may be attached."""

    theta_hat: float
    error: float
    g_min: float
    coverage_bracket: Optional[tuple] = None

    def __post_init__(self):
        if self.error < -1e-9:
            raise ParameterError("stationarity error cannot be negative")
        object.__setattr__(self, "error", max(0.0, float(self.error)))
        if self.coverage_bracket is not None:
            lo, hi = self.coverage_bracket
            if lo > hi:
                raise ParameterError("coverage bracket out of order")


def stationarity_error(f: ConvexFn, theta: float, g_min: float) -> float:
    """[max{-D+ f(theta), D- f(theta)}]_+ - g_min: the distance from zero
    to the subdifferential at theta, minus the best attainable distance."""
    dp = f.dplus(theta)
    dm = f.dminus(theta)
    dist = max(-dp, dm, ext(0.0))
    return float(dist) - float(g_min)


def g_min_oracle(f: ConvexFn) -> float:
    """The infimum over theta of the distance from zero to the
    subdifferential of f.

    Zero whenever f attains its minimum (0 enters the subdifferential
    there, including at domain-boundary minima).  When f is monotone with
    an unattained infimum the limit of |D+| toward the monotone end is
    taken at the search-window edge, valid by derivative monotonicity.
    Piecewise-linear functions are resolved exactly from tail slopes.
    """
    if f.pwl is not None:
        t_left, t_right, f_star = f.pwl.argmin()
        if f_star == NEG_INF:
            slope = f.pwl.left_slope if t_left == NEG_INF else f.pwl.right_slope
            return abs(float(slope))
        return 0.0
    tstar, fstar = minimize(f)
    if tstar == INF:
        edge = min(SEARCH_WINDOW, float(f.domain.hi)) if f.domain.hi.finite else SEARCH_WINDOW
        return abs(float(f.dplus(edge)))
    if tstar == NEG_INF:
        edge = max(-SEARCH_WINDOW, float(f.domain.lo)) if f.domain.lo.finite else -SEARCH_WINDOW
        return abs(float(f.dplus(edge)))
    return 0.0


# ---------------------------------------------------------------------------
# CDF plumbing


class UniformSampler:
    """Continuous uniform distribution on [lo, hi] with exact CDF."""

    def __init__(self, lo: float = 0.0, hi: float = 1.0):
        lo, hi = float(lo), float(hi)
        if not lo < hi:
            raise ParameterError("need lo < hi")
        self.lo = lo
        self.hi = hi

    def draw(self, rng, n: int):
        return rng.uniform(self.lo, self.hi, size=int(n))

    def cdf(self, x: float) -> float:
        return min(1.0, max(0.0, (float(x) - self.lo) / (self.hi - self.lo)))

    cdf_left = cdf

    def to_dict(self) -> dict:
        return {"kind": "uniform", "lo": self.lo, "hi": self.hi}


def _cdf_bracket(P, x: float) -> tuple:
    """(P(Z < x), P(Z <= x)) for a DiscreteDist, a CDF callable (treated
    as continuous), or an object exposing cdf/cdf_left."""
    x = float(x)
    if isinstance(P, DiscreteDist):
        below = sum(p for z, p in P.atoms if z < x)
        at = sum(p for z, p in P.atoms if z == x)
        return below, below + at
    if callable(P):
        v = float(P(x))
        return v, v
    left = P.cdf_left(x) if hasattr(P, "cdf_left") else P.cdf(x)
    return float(left), float(P.cdf(x))


def quantile_coverage(P_eval, theta_hat: float, alpha: float) -> tuple:
    """The CDF bracket (P(Z < theta_hat), P(Z <= theta_hat)); callers
    compare it against the 1 - alpha target."""
    alpha = float(alpha)
    if not 0.0 < alpha < 1.0:
        raise ParameterError("quantile level must be in (0, 1)")
    return _cdf_bracket(P_eval, theta_hat)


def _pinball_population_error(P, theta: float, alpha: float) -> float:
    """Stationarity error of the population pinball loss directly from
    the CDF: D+ = F(theta) - (1-alpha), D- = F_left(theta) - (1-alpha),
    and the correction term vanishes because the quantile is attained."""
    below, at_or_below = _cdf_bracket(P, theta)
    target = 1.0 - alpha
    return max(target - at_or_below, below - target, 0.0)


def _draw(P, rng, n: int):
    if isinstance(P, DiscreteDist):
        return P.sample(rng, n)
    if hasattr(P, "draw"):
        return P.draw(rng, n)
    raise ConfigurationError("sampler must be a DiscreteDist or expose draw(rng, n)")


def concentration_experiment(
    family: LossFamily,
    P,
    n: int,
    t: float,
    reps: int,
    seed: int,
    record: Optional[list] = None,
) -> tuple:
    """Fit empirical quantiles on repeated samples and count how often the
    population stationarity error exceeds t.

    Returns (empirical exceedance frequency, theoretical bound
    2 exp(-n t^2 / (2 L^2))) with L = max(alpha, 1-alpha) the pinball
    Lipschitz constant.  Per-replication rows {rep, theta_hat, stat_error,
    exceeded} are appended to ``record`` when given.
    """
    from .harness import seeded_stream

    if family.name != "quantile":
        raise ConfigurationError(
            "the concentration bound needs a uniformly Lipschitz family; "
            "only the quantile family is supported"
        )
    n, reps, t = int(n), int(reps), float(t)
    if reps < 1:
        raise ParameterError("need at least one replication")
    if n < 1:
        raise ParameterError("need n >= 1")
    if t <= 0.0:
        raise ParameterError("threshold must be positive")
    alpha = float(family.params["alpha"])
    L = max(alpha, 1.0 - alpha)
    exceed = 0
    for rep in range(reps):
        rng = seeded_stream(seed, rep)
        sample = _draw(P, rng, n)
        theta_hat = empirical_quantile(sample, 1.0 - alpha)
        err = _pinball_population_error(P, theta_hat, alpha)
        over = err > t
        exceed += over
        if record is not None:
            record.append(
                {"rep": rep, "theta_hat": float(theta_hat), "stat_error": err, "exceeded": bool(over)}
            )
    bound = 2.0 * math.exp(-n * t * t / (2.0 * L * L))
    return exceed / reps, bound
