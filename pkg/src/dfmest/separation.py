"""Lower-bound toolkit: finitely supported distributions, total-variation
and Hellinger divergences with the product tensorization bound, the
optimization distance between convex functions, the reduction from
minimax estimation to testing, and certified hard-instance constructors.

TV convention: half the L1 distance, so TV always lies in [0, 1]; every
tensorization statement here is in this normalization.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Optional

from .convex import ConvexFn, minimize, mix, _sublevel_given_min
from .errors import CapacityError, CertificationError, ConstructionError, DomainError, ParameterError
from .extreal import INF, NEG_INF, Interval, ext
from .families import LossFamily, RateFunction, family_from_descriptor, norate_family, quantile_family, SampleSpace

__all__ = [
    "DiscreteDist",
    "HardInstance",
    "tv",
    "hellinger2",
    "tv_product_bound",
    "tv_product_exact",
    "dopt",
    "minimax_testing_lb",
    "population_loss",
    "quantile_pair",
    "norate_pair",
    "blowup_pair",
    "hard_instance_from_dict",
]

DOPT_CAP = 1e12


@dataclass(frozen=True)
class DiscreteDist:
    """A finitely supported distribution as (sample point, probability)
    atoms; probabilities are non-negative and sum to one within 1e-12."""

    atoms: tuple

    def __post_init__(self):
        atoms = tuple((float(z), float(p)) for z, p in self.atoms)
        if not atoms:
            raise ConstructionError("distribution needs at least one atom")
        zs = [z for z, _ in atoms]
        if len(set(zs)) != len(zs):
            raise ConstructionError("duplicate sample points")
        if any(p < 0.0 for _, p in atoms):
            raise ConstructionError("negative probability")
        if abs(sum(p for _, p in atoms) - 1.0) > 1e-12:
            raise ConstructionError("probabilities must sum to one")
        object.__setattr__(self, "atoms", atoms)

    @property
    def support(self) -> tuple:
        return tuple(z for z, _ in self.atoms)

    @property
    def probs(self) -> tuple:
        return tuple(p for _, p in self.atoms)

    def prob_of(self, z: float) -> float:
        for zz, p in self.atoms:
            if zz == float(z):
                return p
        return 0.0

    def sample(self, rng, n: int):
        """n i.i.d. draws using the given numpy Generator."""
        import numpy as np

        zs = np.array(self.support)
        return zs[rng.choice(len(zs), size=int(n), p=np.array(self.probs))]

    def to_dict(self) -> dict:
        return {"atoms": [[z, p] for z, p in self.atoms]}

    @classmethod
    def from_dict(cls, d: dict) -> "DiscreteDist":
        return cls(tuple((z, p) for z, p in d["atoms"]))


def population_loss(family: LossFamily, dist: DiscreteDist) -> ConvexFn:
    """Expected loss under a finitely supported distribution (zero-weight
    atoms are dropped by the mixture)."""
    return mix(list(dist.probs), [family.loss_at(z) for z in dist.support])


# ---------------------------------------------------------------------------
# divergences


def tv(P0: DiscreteDist, P1: DiscreteDist) -> float:
    """Total variation distance, half-L1 convention."""
    zs = set(P0.support) | set(P1.support)
    return 0.5 * sum(abs(P0.prob_of(z) - P1.prob_of(z)) for z in zs)


def hellinger2(P0: DiscreteDist, P1: DiscreteDist) -> float:
    """Squared Hellinger distance, (1/2) sum (sqrt p0 - sqrt p1)^2."""
    zs = set(P0.support) | set(P1.support)
    return 0.5 * sum(
        (math.sqrt(P0.prob_of(z)) - math.sqrt(P1.prob_of(z))) ** 2 for z in zs
    )


def tv_product_bound(gamma: float, n: int) -> float:
    """TV between n-fold products is at most sqrt(1 - (1 - gamma)^(2n))
    whenever the single-copy TV is at most gamma."""
    gamma = float(gamma)
    if not 0.0 <= gamma <= 1.0:
        raise ParameterError("single-copy TV bound must lie in [0, 1]")
    n = int(n)
    if n < 1:
        raise ParameterError("need n >= 1")
    return math.sqrt(max(0.0, 1.0 - (1.0 - gamma) ** (2 * n)))


def tv_product_exact(P0: DiscreteDist, P1: DiscreteDist, n: int) -> float:
    """Exact TV between n-fold product distributions by enumeration; only
    for small supports (|support| <= 4, n <= 4)."""
    n = int(n)
    zs = sorted(set(P0.support) | set(P1.support))
    if len(zs) > 4 or n > 4 or n < 1:
        raise CapacityError("product enumeration limited to support <= 4 and n <= 4")
    total = 0.0
    for combo in itertools.product(zs, repeat=n):
        q0 = math.prod(P0.prob_of(z) for z in combo)
        q1 = math.prod(P1.prob_of(z) for z in combo)
        total += abs(q0 - q1)
    return 0.5 * total


# ---------------------------------------------------------------------------
# optimization distance


def _sublevel_of(f: ConvexFn, level, tstar, fstar, tol: float) -> Interval:
    if f.pwl is not None:
        return f.pwl.sublevel(level).intersect(f.domain)
    return _sublevel_given_min(f, level, tstar, fstar, tol)


def dopt(f0: ConvexFn, f1: ConvexFn, tol: float = 1e-9) -> float:
    """Optimization distance between two convex functions.

    The supremum of delta such that the strict delta-sublevel sets (levels
    taken relative to each function's own infimum) are disjoint.  Closed
    sublevel intervals at level f* + delta - tol stand in for the strict
    sets; bisection on delta converges to absolute tolerance tol.  Returns
    +inf when the sets stay disjoint up to delta = 1e12.
    """
    tol = float(tol)
    if tol <= 0.0:
        raise ParameterError("tolerance must be positive")
    t0, v0 = minimize(f0, tol=tol)
    t1, v1 = minimize(f1, tol=tol)
    if v0 == NEG_INF or v1 == NEG_INF:
        raise DomainError("optimization distance needs functions bounded below")

    def disjoint(delta: float) -> bool:
        s0 = _sublevel_of(f0, v0 + (delta - tol), t0, v0, tol)
        s1 = _sublevel_of(f1, v1 + (delta - tol), t1, v1, tol)
        return s0.intersect(s1).empty

    hi = max(tol, 1.0)
    while disjoint(hi):
        hi *= 2.0
        if hi > DOPT_CAP:
            return math.inf
    lo = 0.0
    while hi - lo > tol:
        m = 0.5 * (lo + hi)
        if disjoint(m):
            lo = m
        else:
            hi = m
    return 0.5 * (lo + hi)


def minimax_testing_lb(dopt_lb: float, tv_n: float) -> float:
    """Minimax risk floor from a separation plus an n-sample TV bound:
    dopt_lb/2 * (1 - tv_n)."""
    dopt_lb = float(dopt_lb)
    tv_n = float(tv_n)
    if dopt_lb < 0.0:
        raise ParameterError("separation must be non-negative")
    if not 0.0 <= tv_n <= 1.0:
        raise ParameterError("TV bound must lie in [0, 1]")
    return 0.5 * dopt_lb * (1.0 - tv_n)


# ---------------------------------------------------------------------------
# hard instances


@dataclass(frozen=True)
class HardInstance:
    """A certified pair of distributions over one loss family.

    ``dopt_lb`` is the claimed separation between the two population
    losses and ``tv_upper`` the claimed bound on TV(P0, P1); construction
    verifies both numerically.  ``minimax_floor`` combines them through
    the tensorization bound at sample size ``n``.
    """

    family: LossFamily
    P0: DiscreteDist
    P1: DiscreteDist
    n: int
    dopt_lb: float
    tv_upper: float
    minimax_floor: float

    def population_losses(self) -> tuple:
        return population_loss(self.family, self.P0), population_loss(self.family, self.P1)

    def verify(self, tol: float = 1e-6) -> float:
        """Re-check the certified constants; returns the measured
        separation, raising when a claim fails."""
        measured_tv = tv(self.P0, self.P1)
        if measured_tv > self.tv_upper + 1e-12:
            raise CertificationError(
                f"TV {measured_tv} exceeds the claimed bound {self.tv_upper}"
            )
        L0, L1 = self.population_losses()
        measured = dopt(L0, L1, tol=min(tol, 1e-7))
        if self.dopt_lb > measured + tol:
            raise CertificationError(
                f"claimed separation {self.dopt_lb} exceeds measured {measured}"
            )
        floor = minimax_testing_lb(self.dopt_lb, tv_product_bound(min(self.tv_upper, 1.0), self.n))
        if abs(floor - self.minimax_floor) > 1e-12:
            raise CertificationError("minimax floor inconsistent with its ingredients")
        return measured

    def to_dict(self) -> dict:
        return {
            "family": self.family.descriptor(),
            "P0": self.P0.to_dict(),
            "P1": self.P1.to_dict(),
            "n": self.n,
            "dopt_lb": self.dopt_lb,
            "tv_upper": self.tv_upper,
            "minimax_floor": self.minimax_floor,
        }


def _certified(family, P0, P1, n, dopt_lb, tv_upper) -> HardInstance:
    floor = minimax_testing_lb(dopt_lb, tv_product_bound(min(tv_upper, 1.0), n))
    inst = HardInstance(family, P0, P1, int(n), float(dopt_lb), float(tv_upper), floor)
    inst.verify()
    return inst


def hard_instance_from_dict(d: dict) -> HardInstance:
    inst = HardInstance(
        family_from_descriptor(d["family"]),
        DiscreteDist.from_dict(d["P0"]),
        DiscreteDist.from_dict(d["P1"]),
        int(d["n"]),
        float(d["dopt_lb"]),
        float(d["tv_upper"]),
        float(d["minimax_floor"]),
    )
    inst.verify()
    return inst


def quantile_pair(alpha: float, z0: float, z1: float, delta: float) -> HardInstance:
    """Two-point quantile instance: tilting the weight on {z0, z1} by
    +-delta moves the alpha-quantile across the gap, separating the
    population losses by (delta/2)|z1 - z0| while TV stays at 2*delta.

    The targeted sample size is n = round(1/(2*delta)), matching the
    delta = 1/(2n) calibration.
    """
    alpha, z0, z1, delta = float(alpha), float(z0), float(z1), float(delta)
    if not z0 < z1:
        raise ParameterError("need z0 < z1")
    if not 0.0 < alpha < 1.0:
        raise ParameterError("quantile level must be in (0, 1)")
    if not 0.0 < delta <= min(alpha, 1.0 - alpha):
        raise ParameterError("tilt must satisfy 0 < delta <= min(alpha, 1 - alpha)")
    family = quantile_family(alpha, SampleSpace.finite((z0, z1)))
    P0 = DiscreteDist(((z0, 1.0 - alpha + delta), (z1, alpha - delta)))
    P1 = DiscreteDist(((z0, 1.0 - alpha - delta), (z1, alpha + delta)))
    n = max(1, round(1.0 / (2.0 * delta)))
    return _certified(family, P0, P1, n, 0.5 * delta * (z1 - z0), 2.0 * delta)


def norate_pair(rate, delta: float) -> HardInstance:
    """Slow-rate instance: P0 is a point mass at 0 and P1 leaks mass delta
    onto the steep sample, separating the losses by 1/(2 r(2/delta)) while
    TV(P0, P1) = delta.  Targets n = round(1/delta) samples."""
    delta = float(delta)
    if not 0.0 < delta < 0.5:
        raise ParameterError("mixing weight must be in (0, 1/2)")
    family = norate_family(rate)
    rate = family.params["rate"]
    P0 = DiscreteDist(((0.0, 1.0),))
    P1 = DiscreteDist(((0.0, 1.0 - delta), (1.0, delta)))
    dopt_lb = 0.5 / rate.forward(2.0 / delta)
    n = max(1, round(1.0 / delta))
    return _certified(family, P0, P1, n, dopt_lb, delta)


def blowup_pair(family: LossFamily, theta0: float, delta_gap: float, n: int) -> HardInstance:
    """Instance hiding a steep sample at probability 1/n^2.

    P0 sits on a sample z+ whose loss strictly increases at theta0; P1
    mixes in weight 1/n^2 on a sample z_L so steep that the mixture's left
    derivative at theta0 + delta_gap is at most -n/2, pushing the mixture
    minimizer above theta0 + delta_gap.  The separation is a * delta_gap
    with a the slope of loss_{z+} at theta0; TV(P0, P1) = 1/n^2.

    Requires the family to have unboundedly negative left derivatives at
    theta0 + delta_gap (otherwise the construction is inapplicable) and to
    expose samples of prescribed slope.
    """
    theta0, delta_gap, n = float(theta0), float(delta_gap), int(n)
    if n < 2:
        raise ParameterError("need n >= 2")
    if delta_gap <= 0.0:
        raise ParameterError("need a positive separation gap")
    theta1 = theta0 + delta_gap
    dom = family.theta_domain
    if not (dom.lo < ext(theta0) and ext(theta1) < dom.hi):
        raise ParameterError("theta0 and theta0 + delta_gap must be interior")
    if family.inf_dminus(theta1) != NEG_INF:
        raise ConstructionError(
            "family has bounded negative slopes near theta0: no blow-up instance exists"
        )
    z_plus = family.sample_with_slope(theta0, 1.0)
    if z_plus is None:
        raise ConstructionError("family exposes no sample with positive slope at theta0")
    a = float(family.loss_at(z_plus).dplus(theta0))
    if a <= 0.0:
        raise ConstructionError("witness sample has non-increasing loss at theta0")

    w = 1.0 / n**2
    L = float(n) ** 3
    while True:
        z_L = family.sample_with_slope(theta1, -L)
        if z_L is None:
            raise ConstructionError("family exposes no steep sample at theta0 + delta_gap")
        mixed = (1.0 - w) * float(family.loss_at(z_plus).dminus(theta1)) + w * float(
            family.loss_at(z_L).dminus(theta1)
        )
        if mixed <= -0.5 * n:
            break
        L *= 2.0
        if L > 1e300:
            raise ConstructionError("could not reach the required mixture steepness")
    P0 = DiscreteDist(((float(z_plus), 1.0),))
    P1 = DiscreteDist(((float(z_plus), 1.0 - w), (float(z_L), w)))
    return _certified(family, P0, P1, n, a * delta_gap, w)
