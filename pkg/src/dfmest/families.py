"""Concrete loss families: a sample space, a map z -> convex loss, and
the analytic oracles (derivative envelopes, per-sample minima, gap
functions) that the condition checkers and estimators consume.

Envelope contract: ``sup_dplus`` and ``inf_dminus`` are the pointwise
sup/inf over the sample space of the per-sample one-sided derivatives,
defined for ``theta`` in the interior of the parameter domain.  Finite
sample spaces get exact envelopes by enumeration; interval spaces supply
closed forms.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .convex import ConvexFn, PiecewiseLinearConvex, minimize
from .errors import ConstructionError, DomainError, ParameterError
from .extreal import INF, NEG_INF, ExtReal, Interval, UNIT, REAL_LINE, ext, interval

__all__ = [
    "SampleSpace",
    "LossFamily",
    "RateFunction",
    "identity_rate",
    "power_rate",
    "rate_from_inverse",
    "quantile_family",
    "bernoulli_log_family",
    "squared_family",
    "exponential_family",
    "norate_family",
    "piecewise_family",
    "family_from_descriptor",
    "pinball_weighted_argmin",
]

_EXP_MAX = 709.0  # log of the largest double
_EXP_MIN = -745.0  # below this exp underflows to zero
_TINY = 5e-324  # smallest positive subnormal


def _safe_exp(x: float) -> float:
    """exp clamped into (0, +inf]: overflow maps to inf, underflow to the
    smallest subnormal so that strictly positive quantities never collapse
    to zero (sign bisections depend on this)."""
    if x > _EXP_MAX:
        return math.inf
    if x < _EXP_MIN:
        return _TINY
    return math.exp(x)


# ---------------------------------------------------------------------------
# sample spaces


@dataclass(frozen=True)
class SampleSpace:
    """Either a finite set of atoms or a real interval of sample points."""

    kind: str
    atoms: tuple = ()
    bounds: Optional[Interval] = None

    def __post_init__(self):
        if self.kind == "finite":
            atoms = tuple(float(z) for z in self.atoms)
            if not atoms:
                raise ConstructionError("finite sample space needs at least one atom")
            if len(set(atoms)) != len(atoms):
                raise ConstructionError("duplicate atoms in sample space")
            object.__setattr__(self, "atoms", atoms)
        elif self.kind == "interval":
            if self.bounds is None or self.bounds.empty:
                raise ConstructionError("interval sample space needs non-empty bounds")
        else:
            raise ConstructionError(f"unknown sample-space kind {self.kind!r}")

    @classmethod
    def finite(cls, atoms: Sequence[float]) -> "SampleSpace":
        return cls("finite", atoms=tuple(atoms))

    @classmethod
    def real_interval(cls, lo=NEG_INF, hi=INF) -> "SampleSpace":
        return cls("interval", bounds=interval(lo, hi))

    def contains(self, z: float) -> bool:
        if self.kind == "finite":
            return float(z) in self.atoms
        return self.bounds.contains(z)

    @property
    def z_min(self) -> ExtReal:
        return ext(min(self.atoms)) if self.kind == "finite" else self.bounds.lo

    @property
    def z_max(self) -> ExtReal:
        return ext(max(self.atoms)) if self.kind == "finite" else self.bounds.hi

    def to_dict(self) -> dict:
        if self.kind == "finite":
            return {"kind": "finite", "atoms": list(self.atoms)}
        return {"kind": "interval", "bounds": [_enc(self.bounds.lo), _enc(self.bounds.hi)]}

    @classmethod
    def from_dict(cls, d: dict) -> "SampleSpace":
        if d["kind"] == "finite":
            return cls.finite(d["atoms"])
        lo, hi = d["bounds"]
        return cls.real_interval(_dec(lo), _dec(hi))


def _enc(x: ExtReal):
    if x == INF:
        return "inf"
    if x == NEG_INF:
        return "-inf"
    return float(x)


def _dec(x):
    if x == "inf":
        return INF
    if x == "-inf":
        return NEG_INF
    return ext(float(x))


# ---------------------------------------------------------------------------
# the family object


class LossFamily:
    """A sample space plus a map z -> ConvexFn with family-level oracles.

    Required hooks are ``loss``; the rest default to enumeration (finite
    spaces) or generic minimization.  All optional hooks exist to make
    specific operations exact or fast; they must agree with the generic
    routes, a contract the test suite enforces.

    Hook signatures (all take/return plain floats unless noted):
      loss(z) -> ConvexFn
      sup_dplus(theta) / inf_dminus(theta) -> ExtReal-coercible
      per_z_min(z) -> (ExtReal, ExtReal)
      gap(z, I: Interval) -> ExtReal-coercible
      gap_sup(probe: Interval, eps) -> (ExtReal, witness z) or None
      weighted_argmin(weights, zs, over: Interval) -> Interval
      dplus_at(z, theta) -> float          (fast per-sample right derivative)
      sample_with_slope(theta, slope) -> z or None
    """

    def __init__(
        self,
        name: str,
        space: SampleSpace,
        theta_domain: Interval,
        params: Optional[dict] = None,
        *,
        loss: Callable,
        sup_dplus: Optional[Callable] = None,
        inf_dminus: Optional[Callable] = None,
        per_z_min: Optional[Callable] = None,
        gap: Optional[Callable] = None,
        gap_sup: Optional[Callable] = None,
        weighted_argmin: Optional[Callable] = None,
        dplus_at: Optional[Callable] = None,
        sample_with_slope: Optional[Callable] = None,
    ):
        if theta_domain.empty or not float(theta_domain.length) > 0.0:
            raise ConstructionError("parameter domain must have non-empty interior")
        self.name = name
        self.space = space
        self.theta_domain = theta_domain
        self.params = dict(params or {})
        self._loss = loss
        self._sup_dplus = sup_dplus
        self._inf_dminus = inf_dminus
        self._per_z_min = per_z_min
        self._gap = gap
        self._gap_sup = gap_sup
        self._weighted_argmin = weighted_argmin
        self._dplus_at = dplus_at
        self._sample_with_slope = sample_with_slope
        self._cache: dict = {}

    # -- core map -------------------------------------------------------------
    def loss_at(self, z) -> ConvexFn:
        z = float(z)
        if not self.space.contains(z):
            raise DomainError(f"sample point {z} outside the sample space")
        f = self._cache.get(z)
        if f is None:
            if len(self._cache) > 8192:
                self._cache.clear()
            f = self._loss(z)
            self._cache[z] = f
        return f

    # -- envelopes -------------------------------------------------------------
    def _interior_check(self, theta: float):
        d = self.theta_domain
        if not (d.lo < ext(theta) < d.hi):
            raise DomainError(f"{theta} not in the interior of {d}")

    def sup_dplus(self, theta) -> ExtReal:
        """sup over z of D+ loss_z(theta); interior theta only."""
        theta = float(theta)
        self._interior_check(theta)
        if self._sup_dplus is not None:
            return ext(self._sup_dplus(theta))
        if self.space.kind != "finite":
            raise ConstructionError(f"{self.name}: no derivative-envelope oracle")
        return max(self.loss_at(z).dplus(theta) for z in self.space.atoms)

    def inf_dminus(self, theta) -> ExtReal:
        """inf over z of D- loss_z(theta); interior theta only."""
        theta = float(theta)
        self._interior_check(theta)
        if self._inf_dminus is not None:
            return ext(self._inf_dminus(theta))
        if self.space.kind != "finite":
            raise ConstructionError(f"{self.name}: no derivative-envelope oracle")
        return min(self.loss_at(z).dminus(theta) for z in self.space.atoms)

    # -- per-sample structure ----------------------------------------------------
    def per_z_min(self, z) -> tuple:
        """(argmin, min value) of loss_z over the parameter domain."""
        if self._per_z_min is not None:
            t, v = self._per_z_min(float(z))
            return ext(t), ext(v)
        return minimize(self.loss_at(z), self.theta_domain)

    def gap(self, z, region: Interval) -> ExtReal:
        """inf over the region of loss_z minus the global minimum of loss_z."""
        if region.empty:
            raise DomainError("gap region is empty")
        if self._gap is not None:
            return ext(self._gap(float(z), region))
        _, best = self.per_z_min(z)
        _, restricted = minimize(self.loss_at(z), region)
        return restricted - best

    def gap_sup(self, probe: Interval, eps: float):
        """(sup over z of gap(z, probe), witnessing z), or None when the
        supremum cannot be certified."""
        if self._gap_sup is not None:
            return self._gap_sup(probe, float(eps))
        if self.space.kind == "finite":
            best_z, best = None, None
            for z in self.space.atoms:
                g = self.gap(z, probe)
                if best is None or g > best:
                    best, best_z = g, z
            return best, best_z
        return None

    # -- estimator accelerators ---------------------------------------------------
    def weighted_argmin(self, weights, zs, over: Interval) -> Optional[Interval]:
        if self._weighted_argmin is None:
            return None
        return self._weighted_argmin(weights, zs, over)

    def dplus_at(self, z, theta: float) -> float:
        if self._dplus_at is not None:
            return self._dplus_at(float(z), float(theta))
        return float(self.loss_at(z).dplus(theta))

    def sample_with_slope(self, theta: float, slope: float):
        if self._sample_with_slope is None:
            return None
        return self._sample_with_slope(float(theta), float(slope))

    # -- serialization ----------------------------------------------------------
    def descriptor(self) -> dict:
        d = {
            "name": self.name,
            "params": _encode_params(self.params),
            "space": self.space.to_dict(),
            "theta_domain": [_enc(self.theta_domain.lo), _enc(self.theta_domain.hi)],
        }
        return d

    def __repr__(self):
        return f"LossFamily({self.name!r}, params={self.params!r})"


def _encode_params(params: dict) -> dict:
    out = {}
    for k, v in params.items():
        if isinstance(v, RateFunction):
            out[k] = v.descriptor()
        elif isinstance(v, dict):
            out[k] = v
        else:
            out[k] = v
    return out


def _clamp(x: float, I: Interval) -> float:
    return I.clamp(x)


# ---------------------------------------------------------------------------
# quantile / pinball


def pinball_weighted_argmin(alpha: float, weights, zs, over: Interval) -> Interval:
    """Exact argmin interval of a weighted pinball empirical loss.

    Sorting plus cumulative weights: the argmin is the set of weighted
    (1-alpha)-quantiles, located where the cumulative weight crosses
    (1-alpha) * total.
    """
    z = np.asarray(zs, dtype=float)
    w = np.asarray(weights, dtype=float)
    if z.size == 0:
        raise ParameterError("empty sample")
    order = np.argsort(z, kind="stable")
    z, w = z[order], w[order]
    # merge duplicate atoms so cumulative weights strictly step at each z
    uniq, inv = np.unique(z, return_inverse=True)
    wm = np.zeros(uniq.size)
    np.add.at(wm, inv, w)
    cum = np.cumsum(wm)
    total = cum[-1]
    m = (1.0 - alpha) * total
    slack = 1e-12 * max(total, 1.0)
    j_left = int(np.searchsorted(cum, m - slack, side="left"))
    j_right = int(np.searchsorted(cum, m + slack, side="right"))
    j_left = min(j_left, uniq.size - 1)
    j_right = min(j_right, uniq.size - 1)
    amin = Interval(ext(uniq[j_left]), ext(uniq[j_right]))
    clipped = amin.intersect(over)
    if not clipped.empty:
        return clipped
    side = over.hi if amin.lo > over.hi else over.lo
    return Interval(side, side)


def quantile_family(alpha: float, space: Optional[SampleSpace] = None) -> LossFamily:
    """Normalized pinball losses: loss_z(t) = a[t-z]_+ + (1-a)[z-t]_+ - c_z
    with c_z = a[-z]_+ + (1-a)[z]_+, anchoring every loss to vanish at 0."""
    if not 0.0 < alpha < 1.0:
        raise ParameterError("quantile level must lie in (0, 1)")
    if space is None:
        space = SampleSpace.real_interval()
    a = float(alpha)

    def loss(z: float) -> ConvexFn:
        c = a * max(-z, 0.0) + (1.0 - a) * max(z, 0.0)
        pwl = PiecewiseLinearConvex(((z, -c),), ext(-(1.0 - a)), ext(a))
        return ConvexFn.from_pwl(pwl)

    zmin, zmax = space.z_min, space.z_max

    def sup_dplus(theta: float):
        return a if ext(theta) >= zmin else -(1.0 - a)

    def inf_dminus(theta: float):
        return -(1.0 - a) if ext(theta) <= zmax else a

    def per_z_min(z: float):
        c = a * max(-z, 0.0) + (1.0 - a) * max(z, 0.0)
        return z, -c

    def gap(z: float, I: Interval):
        if I.contains(z):
            return 0.0
        if ext(z) > I.hi:  # region entirely below z: best point is its top
            return (1.0 - a) * float(ext(z) - I.hi)
        return a * float(I.lo - ext(z))

    def gap_sup(probe: Interval, eps: float):
        # gaps grow linearly in |z| beyond the probe, so the sup over an
        # interval sample space is either infinite or attained at its edge
        candidates = []
        if space.z_max == INF and probe.hi.finite:
            return INF, float(probe.hi) + (eps + 1.0) / (1.0 - a)
        if space.z_min == NEG_INF and probe.lo.finite:
            return INF, float(probe.lo) - (eps + 1.0) / a
        for edge in (space.z_min, space.z_max):
            if edge.finite:
                candidates.append(float(edge))
        if not candidates:  # probe unbounded on every unbounded space side
            return ext(0.0), None
        best_z = max(candidates, key=lambda z: float(gap(z, probe)))
        return ext(gap(best_z, probe)), best_z

    def weighted_argmin(weights, zs, over: Interval):
        return pinball_weighted_argmin(a, weights, zs, over)

    def dplus_at(z: float, theta: float) -> float:
        return a if theta >= z else -(1.0 - a)

    return LossFamily(
        "quantile",
        space,
        REAL_LINE,
        {"alpha": a},
        loss=loss,
        sup_dplus=sup_dplus,
        inf_dminus=inf_dminus,
        per_z_min=per_z_min,
        gap=gap,
        gap_sup=gap_sup if space.kind == "interval" else None,
        weighted_argmin=weighted_argmin,
        dplus_at=dplus_at,
    )


# ---------------------------------------------------------------------------
# Bernoulli log loss


def bernoulli_log_family() -> LossFamily:
    """Z = {0,1}, Theta = [0,1], loss_1 = log(1/t), loss_0 = log(1/(1-t));
    the losses blow up at the opposing endpoints."""

    def loss(z: float) -> ConvexFn:
        if z >= 0.5:  # z == 1

            def fn(t: float) -> float:
                return math.inf if t <= 0.0 else -math.log(t)

            def d(t: float) -> float:
                return -1.0 / t

        else:

            def fn(t: float) -> float:
                return math.inf if t >= 1.0 else -math.log1p(-t)

            def d(t: float) -> float:
                return 1.0 / (1.0 - t)

        return ConvexFn(UNIT, fn, deriv_plus=d, deriv_minus=d)

    def weighted_argmin(weights, zs, over: Interval):
        w = np.asarray(weights, dtype=float)
        z = np.asarray(zs, dtype=float)
        # dot and sum can round apart; the weighted mean lies in the hull of z
        mean = float(np.clip(np.dot(w, z) / w.sum(), z.min(), z.max()))
        t = over.clamp(mean)
        return Interval(ext(t), ext(t))

    def dplus_at(z: float, theta: float) -> float:
        return -1.0 / theta if z >= 0.5 else 1.0 / (1.0 - theta)

    return LossFamily(
        "bernoulli_log",
        SampleSpace.finite((0.0, 1.0)),
        UNIT,
        {},
        loss=loss,
        weighted_argmin=weighted_argmin,
        dplus_at=dplus_at,
    )


# ---------------------------------------------------------------------------
# squared loss


def squared_family(space: Optional[SampleSpace] = None, theta_domain: Interval = UNIT) -> LossFamily:
    """loss_z(t) = (t-z)^2 / 2.  The sample space defaults to the whole
    line, where the derivative envelopes are infinite everywhere."""
    if space is None:
        space = SampleSpace.real_interval()
    dom = theta_domain

    def loss(z: float) -> ConvexFn:
        return ConvexFn(
            dom,
            lambda t: 0.5 * (t - z) ** 2,
            deriv_plus=lambda t: t - z,
            deriv_minus=lambda t: t - z,
        )

    sup_dplus = inf_dminus = None
    if space.kind == "interval":
        zlo, zhi = space.bounds.lo, space.bounds.hi

        def sup_dplus(theta: float):
            return INF if zlo == NEG_INF else theta - float(zlo)

        def inf_dminus(theta: float):
            return NEG_INF if zhi == INF else theta - float(zhi)

    def per_z_min(z: float):
        t = dom.clamp(z)
        return t, 0.5 * (t - z) ** 2

    def _dist2(z: float, I: Interval) -> float:
        if I.contains(z):
            return 0.0
        edge = I.hi if ext(z) > I.hi else I.lo
        return float(ext(z) - edge) ** 2

    def gap(z: float, I: Interval):
        return 0.5 * (_dist2(z, I) - _dist2(z, dom))

    def gap_sup(probe: Interval, eps: float):
        # gap(z, P) is convex in z and vanishes on P, so over each side of
        # the probe the sup sits at the sample-space edge; unbounded sides
        # diverge exactly when the domain extends strictly beyond the probe
        P = probe.intersect(dom)
        if P.empty:
            raise DomainError("probe interval does not meet the parameter domain")
        eps = float(eps)
        best = (ext(0.0), None)

        def consider(z: float):
            nonlocal best
            g = ext(gap(z, P))
            if g > best[0]:
                best = (g, z)

        p, d, zhi = P.hi, dom.hi, space.bounds.hi
        if zhi.finite:
            if ext(float(zhi)) > p:
                consider(float(zhi))
        elif d == INF:
            if p.finite:
                return INF, float(p) + math.sqrt(2.0 * (eps + 1.0))
        elif d > p:
            # beyond d the gap grows like (d-p) * z; pick z past the target
            z = 0.5 * (2.0 * (eps + 1.0) / float(d - p) + float(p) + float(d))
            return INF, max(z, float(d)) + 1.0
        q, c, zlo = P.lo, dom.lo, space.bounds.lo
        if zlo.finite:
            if ext(float(zlo)) < q:
                consider(float(zlo))
        elif c == NEG_INF:
            if q.finite:
                return INF, float(q) - math.sqrt(2.0 * (eps + 1.0))
        elif c < q:
            z = 0.5 * (float(q) + float(c) - 2.0 * (eps + 1.0) / float(q - c))
            return INF, min(z, float(c)) - 1.0
        return best

    def weighted_argmin(weights, zs, over: Interval):
        w = np.asarray(weights, dtype=float)
        z = np.asarray(zs, dtype=float)
        t = over.clamp(float(np.clip(np.dot(w, z) / w.sum(), z.min(), z.max())))
        t = dom.clamp(t)
        return Interval(ext(t), ext(t))

    def dplus_at(z: float, theta: float) -> float:
        return theta - z

    def sample_with_slope(theta: float, slope: float):
        z = theta - slope
        if space.contains(z):
            return z
        edge = space.z_min if slope > 0 else space.z_max
        return float(edge) if edge.finite else None

    return LossFamily(
        "squared",
        space,
        dom,
        {},
        loss=loss,
        sup_dplus=sup_dplus,
        inf_dminus=inf_dminus,
        per_z_min=per_z_min,
        gap=gap,
        gap_sup=gap_sup if space.kind == "interval" else None,
        weighted_argmin=weighted_argmin,
        dplus_at=dplus_at,
        sample_with_slope=sample_with_slope,
    )


# ---------------------------------------------------------------------------
# exponential loss


def exponential_family() -> LossFamily:
    """Z = {-1, +1}, Theta = R, loss_z(t) = exp(z t): smooth, minimizer-free."""

    def loss(z: float) -> ConvexFn:
        s = 1.0 if z > 0 else -1.0

        def fn(t: float) -> float:
            return _safe_exp(s * t)

        def d(t: float) -> float:
            return s * _safe_exp(s * t)

        return ConvexFn(REAL_LINE, fn, deriv_plus=d, deriv_minus=d)

    def per_z_min(z: float):
        return (NEG_INF, 0.0) if z > 0 else (INF, 0.0)

    def weighted_argmin(weights, zs, over: Interval):
        w = np.asarray(weights, dtype=float)
        z = np.asarray(zs, dtype=float)
        wp = float(w[z > 0].sum())
        wn = float(w[z <= 0].sum())
        if wp == 0.0:
            t = over.hi
        elif wn == 0.0:
            t = over.lo
        else:
            t = ext(over.clamp(0.5 * math.log(wn / wp)))
        if not t.finite:
            t = ext(over.clamp(math.copysign(1e9, float(t))))
        return Interval(t, t)

    def dplus_at(z: float, theta: float) -> float:
        s = 1.0 if z > 0 else -1.0
        return s * _safe_exp(s * theta)

    return LossFamily(
        "exponential",
        SampleSpace.finite((-1.0, 1.0)),
        REAL_LINE,
        {},
        loss=loss,
        per_z_min=per_z_min,
        weighted_argmin=weighted_argmin,
        dplus_at=dplus_at,
    )


# ---------------------------------------------------------------------------
# rate functions and the slow-rate family


@dataclass(frozen=True)
class RateFunction:
    """A growth rate r with its inverse and the tail integral
    T(t) = integral_t^1 r^{-1}(1/s) ds used by the slow-rate losses."""

    name: str
    inverse: Callable[[float], float]
    forward: Callable[[float], float]
    tail: Callable[[float], float]
    params: dict = field(default_factory=dict)

    def descriptor(self) -> dict:
        if self.name not in ("identity", "power"):
            raise ConstructionError(f"rate {self.name!r} has no serializable form")
        return {"name": self.name, **self.params}

    @classmethod
    def from_descriptor(cls, d: dict) -> "RateFunction":
        if d["name"] == "identity":
            return identity_rate()
        if d["name"] == "power":
            return power_rate(d["p"])
        raise ConstructionError(f"unknown rate descriptor {d!r}")


def _validate_inverse(inv: Callable[[float], float]):
    if abs(inv(1.0) - 1.0) > 1e-9:
        raise ParameterError("rate inverse must satisfy r_inverse(1) = 1")
    xs = np.geomspace(1.0, 1e6, 40)
    vals = [inv(float(x)) for x in xs]
    for a, b in zip(vals, vals[1:]):
        if b < a - 1e-12:
            raise ParameterError("rate inverse must be non-decreasing")


def identity_rate() -> RateFunction:
    return RateFunction(
        "identity",
        inverse=lambda x: x,
        forward=lambda x: x,
        tail=lambda t: math.inf if t <= 0.0 else (0.0 if t >= 1.0 else math.log(1.0 / t)),
    )


def power_rate(p: float) -> RateFunction:
    """r(x) = x^p for p > 0; closed-form inverse and tail integral."""
    p = float(p)
    if p <= 0:
        raise ParameterError("power rate needs p > 0")
    if p == 1.0:
        return identity_rate()
    q = 1.0 - 1.0 / p  # tail integrand exponent bookkeeping

    def tail(t: float) -> float:
        if t >= 1.0:
            return 0.0
        if t <= 0.0:
            return (1.0 / q) if q > 0 else math.inf
        return (1.0 - t**q) / q

    return RateFunction(
        "power",
        inverse=lambda x: x ** (1.0 / p),
        forward=lambda x: x**p,
        tail=tail,
        params={"p": p},
    )


def rate_from_inverse(
    inv: Callable[[float], float],
    forward: Optional[Callable[[float], float]] = None,
    tail: Optional[Callable[[float], float]] = None,
) -> RateFunction:
    """Wrap a generic inverse rate map; the forward map falls back to root
    finding and the tail integral to adaptive quadrature (abs tol 1e-10).
    The quadrature route truncates the singularity at 0: tail(0) is
    reported as +inf when the truncated integral already exceeds 1e10."""
    _validate_inverse(inv)

    if forward is None:

        def forward(y: float) -> float:
            from scipy.optimize import brentq

            if y < 1.0:
                raise ParameterError("rate is calibrated on [1, inf)")
            if y == 1.0:
                return 1.0
            hi = 2.0
            while inv(hi) < y:
                hi *= 2.0
                if hi > 1e300:
                    raise ParameterError("rate inverse never reaches the requested value")
            return float(brentq(lambda x: inv(x) - y, 1.0, hi, xtol=1e-12))

    if tail is None:

        def tail(t: float) -> float:
            from scipy.integrate import quad

            if t >= 1.0:
                return 0.0
            lo = max(t, 1e-12)
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                val, _ = quad(lambda s: inv(1.0 / s), lo, 1.0, epsabs=1e-10, limit=300)
            if t <= 0.0 and val > 1e10:
                return math.inf
            return float(val)

    return RateFunction("custom", inverse=inv, forward=forward, tail=tail)


def norate_family(rate) -> LossFamily:
    """Z = {0,1}, Theta = [0,1]: loss_0(t) = t and
    loss_1(t) = t + integral_t^1 r^{-1}(1/s) ds, whose derivative
    1 - r^{-1}(1/t) steepens without bound as t -> 0."""
    if not isinstance(rate, RateFunction):
        rate = rate_from_inverse(rate)
    inv, tail = rate.inverse, rate.tail

    base = PiecewiseLinearConvex(((0.0, 0.0), (1.0, 1.0)), NEG_INF, INF)

    def loss(z: float) -> ConvexFn:
        if z < 0.5:  # z == 0
            return ConvexFn.from_pwl(base)

        def fn(t: float) -> float:
            return t + tail(t)

        def d(t: float) -> float:
            if t <= 0.0:
                return -math.inf
            return 1.0 - inv(1.0 / t)

        return ConvexFn(UNIT, fn, deriv_plus=d, deriv_minus=d)

    def per_z_min(z: float):
        if z < 0.5:
            return 0.0, 0.0
        return 1.0, 1.0 + tail(1.0)

    def weighted_argmin(weights, zs, over: Interval):
        w = np.asarray(weights, dtype=float)
        z = np.asarray(zs, dtype=float)
        mean = float(np.clip(np.dot(w, z) / w.sum(), z.min(), z.max()))
        if mean <= 0.0:
            t = over.clamp(0.0)
        else:
            t = over.clamp(1.0 / rate.forward(1.0 / mean))
        return Interval(ext(t), ext(t))

    def dplus_at(z: float, theta: float) -> float:
        if z < 0.5:
            return 1.0
        if theta <= 0.0:
            return -math.inf
        return 1.0 - inv(1.0 / theta)

    return LossFamily(
        "norate",
        SampleSpace.finite((0.0, 1.0)),
        UNIT,
        {"rate": rate},
        loss=loss,
        per_z_min=per_z_min,
        weighted_argmin=weighted_argmin,
        dplus_at=dplus_at,
    )


# ---------------------------------------------------------------------------
# user-supplied piecewise-linear tables


def piecewise_family(table: dict) -> LossFamily:
    """A finite table z -> PiecewiseLinearConvex with exact oracles.

    The parameter domain is the intersection of the table's domains; it
    must have non-empty interior.
    """
    if not table:
        raise ConstructionError("piecewise family needs a non-empty table")
    items = {float(z): pwl for z, pwl in table.items()}
    dom = None
    for pwl in items.values():
        dom = pwl.domain if dom is None else dom.intersect(pwl.domain)
    if dom.empty or not float(dom.length) > 0.0:
        raise ConstructionError("table domains share no common interior")

    def loss(z: float) -> ConvexFn:
        return ConvexFn.from_pwl(items[z], domain=dom)

    return LossFamily(
        "piecewise",
        SampleSpace.finite(tuple(items.keys())),
        dom,
        {"table": {repr(z): pwl.to_dict() for z, pwl in items.items()}},
        loss=loss,
    )


# ---------------------------------------------------------------------------
# descriptor registry


def family_from_descriptor(d: dict) -> LossFamily:
    name = d["name"]
    params = d.get("params", {})
    space = SampleSpace.from_dict(d["space"]) if "space" in d and d["space"] else None
    if name == "quantile":
        return quantile_family(params["alpha"], space)
    if name == "bernoulli_log":
        return bernoulli_log_family()
    if name == "squared":
        lo, hi = d.get("theta_domain", [0.0, 1.0])
        return squared_family(space, interval(_dec(lo), _dec(hi)))
    if name == "exponential":
        return exponential_family()
    if name == "norate":
        return norate_family(RateFunction.from_descriptor(params["rate"]))
    if name == "piecewise":
        table = {
            float(z): PiecewiseLinearConvex.from_dict(rec)
            for z, rec in params["table"].items()
        }
        return piecewise_family(table)
    raise ConstructionError(f"unknown family descriptor {name!r}")
