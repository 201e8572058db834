"""Estimators over loss families: exact empirical risk minimization, the
star-restricted variants (domain shrunk toward an interior anchor), an
averaged projected subgradient method, and empirical quantiles.

Interval argmins are resolved to their midpoint throughout, so every
estimator is deterministic given its sample.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .achievability import compact_lipschitz
from .convex import argmin_interval, mix
from .errors import ConfigurationError, DomainError, ParameterError
from .extreal import Interval, REAL_LINE, ext
from .families import LossFamily, pinball_weighted_argmin

__all__ = [
    "Estimator",
    "StarRestriction",
    "erm",
    "star_restrict",
    "restricted_erm",
    "restricted_sgd",
    "empirical_quantile",
    "delta_schedule",
    "estimator_from_descriptor",
]


@dataclass(frozen=True)
class StarRestriction:
    """Shrink a compact domain toward an interior anchor: the restricted
    set is theta0 + (1 - delta)(Theta - theta0)."""

    theta0: float
    delta: float

    def __post_init__(self):
        if not 0.0 <= self.delta <= 1.0:
            raise ParameterError("restriction strength must lie in [0, 1]")


def star_restrict(theta: Interval, theta0: float, delta: float) -> Interval:
    """The restricted domain theta0 + (1 - delta)(Theta - theta0);
    strictly interior to a compact Theta for delta > 0."""
    if theta.empty or not theta.bounded:
        raise DomainError("restriction needs a compact interval")
    theta0 = float(theta0)
    if not float(theta.lo) < theta0 < float(theta.hi):
        raise DomainError("anchor must be interior to the interval")
    if not 0.0 <= float(delta) <= 1.0:
        raise ParameterError("restriction strength must lie in [0, 1]")
    shrink = 1.0 - float(delta)
    lo = theta0 + shrink * (float(theta.lo) - theta0)
    hi = theta0 + shrink * (float(theta.hi) - theta0)
    return Interval(ext(lo), ext(hi))


def delta_schedule(n: int) -> float:
    """Default restriction schedule n^(-1/4), capped at 1."""
    n = int(n)
    if n < 1:
        raise ParameterError("need n >= 1")
    return min(1.0, float(n) ** -0.25)


def _point_of(amin: Interval) -> float:
    if amin.bounded:
        return amin.midpoint()
    if amin.lo.finite:
        return float(amin.lo)
    if amin.hi.finite:
        return float(amin.hi)
    return 0.0


def erm(family: LossFamily, sample: Sequence[float], over: Optional[Interval] = None) -> float:
    """Empirical risk minimizer over an interval; interval argmins resolve
    to their midpoint.

    Faithful to ERM's failure modes: with degenerate samples the minimizer
    may sit at a boundary where the population loss is infinite.
    """
    zs = list(sample)
    if not zs:
        raise ParameterError("empty sample")
    over = family.theta_domain if over is None else over.intersect(family.theta_domain)
    if over.empty:
        raise DomainError("feasible interval does not meet the parameter domain")
    weights = [1.0 / len(zs)] * len(zs)
    amin = family.weighted_argmin(weights, zs, over)
    if amin is None:
        emp = mix(weights, [family.loss_at(z) for z in zs])
        amin = argmin_interval(emp, over)
    return _point_of(amin)


def restricted_erm(
    family: LossFamily,
    sample: Sequence[float],
    theta: Interval,
    restriction: StarRestriction,
) -> float:
    """ERM over the star-restricted domain."""
    return erm(family, sample, star_restrict(theta, restriction.theta0, restriction.delta))


def restricted_sgd(
    family: LossFamily,
    sample: Sequence[float],
    theta: Interval,
    restriction: StarRestriction,
) -> float:
    """Averaged projected subgradient descent on the restricted domain.

    One pass over the sample in order, starting from the anchor, step size
    diam/(L sqrt(n)) with L the certified Lipschitz constant of the
    restricted set; returns the average of the n query iterates, which
    stays inside the restricted set.
    """
    zs = list(sample)
    if not zs:
        raise ParameterError("empty sample")
    restricted = star_restrict(theta, restriction.theta0, restriction.delta)
    if not restricted.strictly_inside(family.theta_domain):
        raise ConfigurationError(
            "restricted set reaches the parameter-domain boundary; "
            "no finite Lipschitz constant is certifiable"
        )
    L = compact_lipschitz(family, restricted)
    if not L.finite:
        raise ConfigurationError("infinite Lipschitz constant on the restricted set")
    L = float(L)
    lo, hi = float(restricted.lo), float(restricted.hi)
    diam = hi - lo
    n = len(zs)
    if L <= 0.0 or diam <= 0.0:
        # constant losses or a point domain: every iterate is the anchor
        return restricted.clamp(restriction.theta0)
    eta = diam / (L * math.sqrt(n))
    cur = float(restriction.theta0)
    total = 0.0
    for z in zs:
        total += cur
        g = family.dplus_at(z, cur)
        cur = cur - eta * g
        if cur < lo:
            cur = lo
        elif cur > hi:
            cur = hi
    return total / n


def empirical_quantile(sample: Sequence[float], level: float) -> float:
    """The empirical level-quantile as the midpoint of the pinball-ERM
    argmin interval (pinball parameter 1 - level)."""
    level = float(level)
    if not 0.0 < level < 1.0:
        raise ParameterError("quantile level must be in (0, 1)")
    zs = list(sample)
    if not zs:
        raise ParameterError("empty sample")
    amin = pinball_weighted_argmin(1.0 - level, [1.0] * len(zs), zs, REAL_LINE)
    return _point_of(amin)


# ---------------------------------------------------------------------------
# descriptor interface


@dataclass(frozen=True)
class Estimator:
    """A named estimator: fit(family, sample, theta, rng) -> point in theta.

    All fits here are deterministic given the sample; the rng argument is
    part of the interface for estimators that need auxiliary randomness.
    """

    name: str
    params: dict = field(default_factory=dict)

    def _restriction(self, sample) -> StarRestriction:
        delta = self.params.get("delta", "schedule")
        if delta == "schedule":
            delta = delta_schedule(len(sample))
        return StarRestriction(float(self.params["theta0"]), float(delta))

    def fit(self, family: LossFamily, sample, theta: Interval, rng=None) -> float:
        if self.name == "erm":
            return erm(family, sample, theta)
        if self.name == "restricted_erm":
            return restricted_erm(family, sample, theta, self._restriction(sample))
        if self.name == "restricted_sgd":
            return restricted_sgd(family, sample, theta, self._restriction(sample))
        if self.name == "empirical_quantile":
            return empirical_quantile(sample, float(self.params["level"]))
        raise ConfigurationError(f"unknown estimator {self.name!r}")

    def descriptor(self) -> dict:
        return {"name": self.name, "params": dict(self.params)}


_KNOWN = ("erm", "restricted_erm", "restricted_sgd", "empirical_quantile")


def estimator_from_descriptor(d: dict) -> Estimator:
    name = d["name"]
    if name not in _KNOWN:
        raise ConfigurationError(f"unknown estimator {name!r}")
    params = dict(d.get("params", {}))
    if name in ("restricted_erm", "restricted_sgd") and "theta0" not in params:
        raise ConfigurationError(f"{name} requires an anchor theta0")
    if name == "empirical_quantile" and "level" not in params:
        raise ConfigurationError("empirical_quantile requires a level")
    return Estimator(name, params)
