"""One-dimensional convex functions with extended-real calculus.

The central objects are :class:`ConvexFn`, a closed convex function on an
interval together with its one-sided derivatives, and
:class:`PiecewiseLinearConvex`, an exact piecewise-linear realization of
the same contract.

Conventions
-----------
The one-sided derivatives are

    D+ f(t) = inf_{h > 0} (f(t + h) - f(t)) / h,
    D- f(t) = sup_{h > 0} (f(t - h) - f(t)) / (-h),

with values in [-inf, +inf].  At the right endpoint of the domain
``D+ f = +inf`` (the function jumps to +inf beyond it) and at the left
endpoint ``D- f = -inf``; at an endpoint where ``f`` itself is +inf the
inward derivative is the limit of interior derivatives, which is -inf on
the left and +inf on the right.  Convexity makes both maps non-decreasing
in ``t`` with ``D- f(t) <= D+ f(t)`` everywhere.

Minimization and sublevel sets are located by bisection on derivative or
value signs.  Searches over unbounded intervals are confined to the window
``[-SEARCH_WINDOW, SEARCH_WINDOW]``; a sign that never flips inside the
window is reported as an infinite endpoint, with the limiting function
value taken at the window edge.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .errors import ConstructionError, DomainError, ParameterError
from .extreal import INF, NEG_INF, ExtReal, Interval, ext

__all__ = [
    "ConvexFn",
    "PiecewiseLinearConvex",
    "dplus",
    "dminus",
    "minimize",
    "argmin_interval",
    "sublevel_interval",
    "mix",
    "pinball",
    "SEARCH_WINDOW",
    "BRACKET_TOL",
]

SEARCH_WINDOW = 1e9
BRACKET_TOL = 1e-9
MAX_BISECT = 200


# ---------------------------------------------------------------------------
# piecewise-linear representation


@dataclass(frozen=True)
class PiecewiseLinearConvex:
    """Convex piecewise-linear function given by breakpoints and tail slopes.

    ``breakpoints`` is a strictly increasing sequence of (x, value) pairs.
    ``left_slope`` is the slope on ``(-inf, x_0]``; ``-inf`` encodes a
    domain wall at ``x_0`` (the function is +inf strictly left of it).
    ``right_slope`` plays the mirrored role, with ``+inf`` as the wall.
    All operations on this class are exact.
    """

    breakpoints: tuple
    left_slope: ExtReal
    right_slope: ExtReal

    def __post_init__(self):
        bps = tuple((float(x), float(v)) for x, v in self.breakpoints)
        if not bps:
            raise ConstructionError("need at least one breakpoint")
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "left_slope", ext(self.left_slope))
        object.__setattr__(self, "right_slope", ext(self.right_slope))
        xs = [x for x, _ in bps]
        vs = [v for _, v in bps]
        if any(not math.isfinite(x) for x in xs) or any(not math.isfinite(v) for v in vs):
            raise ConstructionError("breakpoints must be finite")
        for a, b in zip(xs, xs[1:]):
            if not b > a:
                raise ConstructionError("breakpoint abscissae must be strictly increasing")
        if self.left_slope == INF or self.right_slope == NEG_INF:
            raise ConstructionError("tail slopes out of convex range")
        chain = [self.left_slope] + [ext(s) for s in self._interior_slopes()] + [self.right_slope]
        finite = [abs(float(s)) for s in chain if s.finite]
        scale = max([1.0] + finite)
        for a, b in zip(chain, chain[1:]):
            if float(b) < float(a) - 1e-9 * scale:
                raise ConstructionError("slopes must be non-decreasing (convexity)")

    def _interior_slopes(self) -> list:
        bps = self.breakpoints
        return [
            (bps[i + 1][1] - bps[i][1]) / (bps[i + 1][0] - bps[i][0])
            for i in range(len(bps) - 1)
        ]

    @property
    def domain(self) -> Interval:
        lo = ext(self.breakpoints[0][0]) if self.left_slope == NEG_INF else NEG_INF
        hi = ext(self.breakpoints[-1][0]) if self.right_slope == INF else INF
        return Interval(lo, hi)

    # -- pointwise ----------------------------------------------------------
    def eval(self, t: float) -> ExtReal:
        t = float(t)
        xs = [x for x, _ in self.breakpoints]
        if t < xs[0]:
            if self.left_slope == NEG_INF:
                return INF
            return ext(self.breakpoints[0][1] + float(self.left_slope) * (t - xs[0]))
        if t > xs[-1]:
            if self.right_slope == INF:
                return INF
            return ext(self.breakpoints[-1][1] + float(self.right_slope) * (t - xs[-1]))
        j = bisect_right(xs, t)
        if j > 0 and xs[j - 1] == t:
            return ext(self.breakpoints[j - 1][1])
        x0, v0 = self.breakpoints[j - 1]
        x1, v1 = self.breakpoints[j]
        w = (t - x0) / (x1 - x0)
        return ext((1.0 - w) * v0 + w * v1)

    def dplus(self, t: float) -> ExtReal:
        t = float(t)
        xs = [x for x, _ in self.breakpoints]
        if t < xs[0]:
            if self.left_slope == NEG_INF:
                raise DomainError("point left of the domain wall")
            return self.left_slope
        if t >= xs[-1]:
            if t > xs[-1] and self.right_slope == INF:
                raise DomainError("point right of the domain wall")
            return self.right_slope
        j = bisect_right(xs, t)
        return ext(self._interior_slopes()[j - 1])

    def dminus(self, t: float) -> ExtReal:
        t = float(t)
        xs = [x for x, _ in self.breakpoints]
        if t <= xs[0]:
            if t < xs[0] and self.left_slope == NEG_INF:
                raise DomainError("point left of the domain wall")
            return self.left_slope
        if t > xs[-1]:
            if self.right_slope == INF:
                raise DomainError("point right of the domain wall")
            return self.right_slope
        j = bisect_right(xs, t)
        if xs[j - 1] == t:
            j -= 1
        return ext(self._interior_slopes()[j - 1])

    # -- global structure ----------------------------------------------------
    def argmin(self) -> tuple:
        """Exact argmin interval and minimum value.

        Returns ``(t_left, t_right, f_star)`` as extended reals.  A
        function unbounded below reports its runaway direction through
        ``t_left = t_right = +/-inf`` with ``f_star = -inf``.
        """
        xs = [x for x, _ in self.breakpoints]
        slopes = self._interior_slopes()
        ls, rs = float(self.left_slope), float(self.right_slope)
        if ls > 0.0:
            return NEG_INF, NEG_INF, NEG_INF
        if rs < 0.0:
            return INF, INF, NEG_INF
        if ls >= 0.0:
            t_left = NEG_INF
        else:
            t_left = None
            for i, s in enumerate(slopes):
                if s >= 0.0:
                    t_left = ext(xs[i])
                    break
            if t_left is None:
                t_left = ext(xs[-1])  # right tail has slope >= 0
        if rs <= 0.0:
            t_right = INF
        else:
            t_right = None
            for i in range(len(slopes) - 1, -1, -1):
                if slopes[i] <= 0.0:
                    t_right = ext(xs[i + 1])
                    break
            if t_right is None:
                t_right = ext(xs[0])  # left tail has slope <= 0
        anchor = t_left if t_left.finite else t_right
        f_star = self.eval(float(anchor)) if anchor.finite else ext(self.breakpoints[0][1])
        return t_left, t_right, f_star

    def sublevel(self, level) -> Interval:
        """Exact closed sublevel set {t : f(t) <= level}."""
        level = float(ext(level))
        xs = [x for x, _ in self.breakpoints]
        vs = [v for _, v in self.breakpoints]
        ls, rs = float(self.left_slope), float(self.right_slope)
        if not any(v <= level for v in vs):
            # the sublevel set, if any, lives inside a single runaway tail
            if rs < 0.0:
                return Interval(ext(xs[-1] + (level - vs[-1]) / rs), INF)
            if ls > 0.0:
                return Interval(NEG_INF, ext(xs[0] + (level - vs[0]) / ls))
            return Interval.EMPTY
        # right edge
        if vs[-1] <= level:
            if rs == math.inf:
                right = ext(xs[-1])
            elif rs <= 0.0:
                right = INF
            else:
                right = ext(xs[-1] + (level - vs[-1]) / rs)
        else:
            j = max(i for i, v in enumerate(vs) if v <= level)
            s = (vs[j + 1] - vs[j]) / (xs[j + 1] - xs[j])
            right = ext(xs[j] + (level - vs[j]) / s)
        # left edge
        if vs[0] <= level:
            if ls == -math.inf:
                left = ext(xs[0])
            elif ls >= 0.0:
                left = NEG_INF
            else:
                left = ext(xs[0] + (level - vs[0]) / ls)
        else:
            j = min(i for i, v in enumerate(vs) if v <= level)
            s = (vs[j] - vs[j - 1]) / (xs[j] - xs[j - 1])
            left = ext(xs[j - 1] + (level - vs[j - 1]) / s)
        return Interval(left, right)

    # -- arithmetic -----------------------------------------------------------
    @staticmethod
    def combine(weights: Sequence[float], fns: Sequence["PiecewiseLinearConvex"]) -> "PiecewiseLinearConvex":
        """Exact non-negatively weighted sum over the common domain."""
        if len(weights) != len(fns) or not fns:
            raise ConstructionError("weights and functions must align and be non-empty")
        dom = fns[0].domain
        for f in fns[1:]:
            dom = dom.intersect(f.domain)
        if dom.empty or not float(dom.length) > 0.0:
            raise ConstructionError("common domain has empty interior")
        xs = sorted({x for f in fns for x, _ in f.breakpoints if dom.contains(x)})
        if not xs:
            raise ConstructionError("no breakpoint falls in the common domain")
        vals = []
        for x in xs:
            total = ext(0.0)
            for w, f in zip(weights, fns):
                total = total + float(w) * f.eval(x)
            vals.append(float(total))
        lslope = ext(0.0)
        rslope = ext(0.0)
        for w, f in zip(weights, fns):
            w = float(w)
            # left of the first retained breakpoint each component is either
            # on its own left tail or contributes its wall slope
            lslope = lslope + w * f.dminus(xs[0]) if f.domain.lo < ext(xs[0]) else lslope + w * f.left_slope
            rslope = rslope + w * f.dplus(xs[-1]) if f.domain.hi > ext(xs[-1]) else rslope + w * f.right_slope
        return PiecewiseLinearConvex(tuple(zip(xs, vals)), lslope, rslope)

    def scaled(self, w: float) -> "PiecewiseLinearConvex":
        if w <= 0:
            raise ParameterError("scale factor must be positive")
        return PiecewiseLinearConvex(
            tuple((x, w * v) for x, v in self.breakpoints),
            self.left_slope * w,
            self.right_slope * w,
        )

    # -- serialization ---------------------------------------------------------
    def to_dict(self) -> dict:
        def enc(s: ExtReal):
            if s == INF:
                return "inf"
            if s == NEG_INF:
                return "-inf"
            return float(s)

        return {
            "breakpoints": [[x, v] for x, v in self.breakpoints],
            "left_slope": enc(self.left_slope),
            "right_slope": enc(self.right_slope),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PiecewiseLinearConvex":
        def dec(s):
            if s == "inf":
                return INF
            if s == "-inf":
                return NEG_INF
            return ext(float(s))

        return cls(
            tuple((float(x), float(v)) for x, v in d["breakpoints"]),
            dec(d["left_slope"]),
            dec(d["right_slope"]),
        )


# ---------------------------------------------------------------------------
# general convex functions


class ConvexFn:
    """A closed convex function on an interval, with one-sided derivatives.

    Parameters
    ----------
    domain:
        Closed interval on which the function is considered; the function
        is +inf outside it.  Values must be finite on the interior.
    fn:
        Callable evaluating the function; may return ``math.inf`` at
        domain endpoints.
    deriv_plus, deriv_minus:
        Optional closed-form one-sided derivatives, consulted at interior
        points and at endpoints where the function is finite.  When
        absent, derivatives fall back to one-sided difference quotients.
    pwl:
        Optional exact piecewise-linear representation; operations use it
        to bypass bisection entirely.
    """

    __slots__ = ("domain", "_fn", "_dplus", "_dminus", "pwl")

    def __init__(
        self,
        domain: Interval,
        fn: Callable[[float], float],
        deriv_plus: Optional[Callable[[float], float]] = None,
        deriv_minus: Optional[Callable[[float], float]] = None,
        pwl: Optional[PiecewiseLinearConvex] = None,
    ):
        if domain.empty:
            raise ConstructionError("domain must be non-empty")
        self.domain = domain
        self._fn = fn
        self._dplus = deriv_plus
        self._dminus = deriv_minus
        self.pwl = pwl

    @classmethod
    def from_pwl(cls, pwl: PiecewiseLinearConvex, domain: Optional[Interval] = None) -> "ConvexFn":
        dom = pwl.domain if domain is None else domain.intersect(pwl.domain)
        return cls(
            dom,
            lambda t: float(pwl.eval(t)),
            deriv_plus=lambda t: float(pwl.dplus(t)),
            deriv_minus=lambda t: float(pwl.dminus(t)),
            pwl=pwl,
        )

    def __call__(self, theta) -> ExtReal:
        t = float(theta)
        if not self.domain.contains(t):
            return INF
        return ext(self._fn(t))

    def dplus(self, theta) -> ExtReal:
        t = float(theta)
        if not self.domain.contains(t):
            raise DomainError(f"{t} outside domain {self.domain}")
        if self.domain.hi.finite and t == float(self.domain.hi):
            return INF
        if self.domain.lo.finite and t == float(self.domain.lo) and self(t) == INF:
            return NEG_INF
        if self._dplus is not None:
            return ext(self._dplus(t))
        return self._numeric_deriv(t, +1)

    def dminus(self, theta) -> ExtReal:
        t = float(theta)
        if not self.domain.contains(t):
            raise DomainError(f"{t} outside domain {self.domain}")
        if self.domain.lo.finite and t == float(self.domain.lo):
            return NEG_INF
        if self.domain.hi.finite and t == float(self.domain.hi) and self(t) == INF:
            return INF
        if self._dminus is not None:
            return ext(self._dminus(t))
        return self._numeric_deriv(t, -1)

    def _numeric_deriv(self, t: float, side: int) -> ExtReal:
        """One-sided difference quotient with a geometrically shrinking step.

        The quotient is monotone in the step by convexity, so the last
        stable value approximates the limit; the step is floored near
        sqrt(eps) to keep cancellation error below ~1e-8.
        """
        f0 = self(t)
        if f0 == INF:
            return NEG_INF if side > 0 else INF
        f0 = float(f0)
        edge = self.domain.hi if side > 0 else self.domain.lo
        span = abs(float(edge) - t) if edge.finite else 1.0
        h = min(1.0, 0.5 * span) if span > 0 else 1.0
        floor = 1e-8 * max(1.0, abs(t))
        prev = None
        while True:
            fh = self(t + side * h)
            if fh == INF:
                h /= 8.0
                if h < floor:
                    return INF if side > 0 else NEG_INF
                continue
            q = side * (float(fh) - f0) / h
            if prev is not None and abs(q - prev) <= 1e-9 * max(1.0, abs(q)):
                return ext(q)
            prev = q
            h /= 8.0
            if h < floor:
                return ext(q)


def dplus(f: ConvexFn, theta) -> ExtReal:
    """Right derivative of ``f`` at ``theta``."""
    return f.dplus(theta)


def dminus(f: ConvexFn, theta) -> ExtReal:
    """Left derivative of ``f`` at ``theta``."""
    return f.dminus(theta)


# ---------------------------------------------------------------------------
# bisection machinery


def _probe_range(D: Interval) -> tuple:
    a = float(D.lo) if D.lo.finite else -SEARCH_WINDOW
    b = float(D.hi) if D.hi.finite else SEARCH_WINDOW
    if b < a:  # domain lies entirely beyond the default window
        if D.lo.finite:
            b = a + SEARCH_WINDOW
        else:
            a = b - SEARCH_WINDOW
    return a, b


def minimize(f: ConvexFn, over: Optional[Interval] = None, tol: float = BRACKET_TOL) -> tuple:
    """Minimize a convex function over an interval.

    Returns ``(theta_star, f_star)`` as extended reals.  Interior minima
    are bracketed to within ``tol`` by bisection on the derivative sign.
    When the derivative never changes sign inside the search window the
    appropriate endpoint is returned, possibly infinite, with ``f_star``
    the limiting value at the window edge.
    """
    D = f.domain if over is None else over.intersect(f.domain)
    if D.empty:
        raise DomainError("minimization interval does not meet the domain")
    if float(D.length) == 0.0:
        t = float(D.lo)
        return ext(t), f(t)
    if f.pwl is not None:
        return _minimize_pwl(f.pwl, D)
    a, b = _probe_range(D)
    if f.dplus(a) >= 0.0:
        theta = ext(a) if D.lo.finite else NEG_INF
        return theta, f(a)
    if f.dminus(b) <= 0.0:
        theta = ext(b) if D.hi.finite else INF
        return theta, f(b)
    it = 0
    while b - a > tol and it < MAX_BISECT:
        m = 0.5 * (a + b)
        if f.dminus(m) > 0.0:
            b = m
        elif f.dplus(m) < 0.0:
            a = m
        else:
            return ext(m), f(m)
        it += 1
    m = 0.5 * (a + b)
    return ext(m), f(m)


def _minimize_pwl(pwl: PiecewiseLinearConvex, D: Interval) -> tuple:
    t_left, t_right, f_star = pwl.argmin()
    if f_star == NEG_INF:
        # unbounded below toward t_left; over D the restricted minimum sits
        # at the endpoint in the runaway direction
        side = D.lo if t_left == NEG_INF else D.hi
        if side.finite:
            return side, pwl.eval(float(side))
        return side, NEG_INF
    amin = Interval(t_left, t_right).intersect(D)
    if amin.empty:
        side = D.hi if t_left > D.hi else D.lo
        # side is finite here: an infinite D endpoint cannot separate it
        # from a non-runaway argmin
        return side, pwl.eval(float(side))
    if amin.bounded:
        t = amin.midpoint()
    elif amin.lo.finite:
        t = float(amin.lo)
    elif amin.hi.finite:
        t = float(amin.hi)
    else:
        a, b = _probe_range(D)
        t = min(max(0.0, a), b)
    return ext(t), pwl.eval(t)


def argmin_interval(f: ConvexFn, over: Optional[Interval] = None, tol: float = BRACKET_TOL) -> Interval:
    """The set of minimizers of ``f`` over ``over``, as an interval.

    Endpoints are located by bisection on the monotone derivative-sign
    maps; an endpoint is infinite when the sign never flips inside the
    search window.
    """
    D = f.domain if over is None else over.intersect(f.domain)
    if D.empty:
        raise DomainError("interval does not meet the domain")
    if float(D.length) == 0.0:
        return Interval(D.lo, D.lo)
    if f.pwl is not None:
        t_left, t_right, f_star = f.pwl.argmin()
        if f_star == NEG_INF:
            side = D.lo if t_left == NEG_INF else D.hi
            return Interval(side, side)
        amin = Interval(t_left, t_right).intersect(D)
        if amin.empty:
            side = D.hi if t_left > D.hi else D.lo
            return Interval(side, side)
        return amin
    a, b = _probe_range(D)

    # left edge: smallest theta with D+ >= 0
    if f.dplus(a) >= 0.0:
        t_left = D.lo if not D.lo.finite else ext(a)
    elif f.dplus(b) < 0.0:
        t_left = D.hi if not D.hi.finite else ext(b)
    else:
        lo_, hi_ = a, b
        it = 0
        while hi_ - lo_ > tol and it < MAX_BISECT:
            m = 0.5 * (lo_ + hi_)
            if f.dplus(m) >= 0.0:
                hi_ = m
            else:
                lo_ = m
            it += 1
        t_left = ext(hi_)

    # right edge: largest theta with D- <= 0
    if f.dminus(b) <= 0.0:
        t_right = D.hi if not D.hi.finite else ext(b)
    elif f.dminus(a) > 0.0:
        t_right = D.lo if not D.lo.finite else ext(a)
    else:
        lo_, hi_ = a, b
        it = 0
        while hi_ - lo_ > tol and it < MAX_BISECT:
            m = 0.5 * (lo_ + hi_)
            if f.dminus(m) <= 0.0:
                lo_ = m
            else:
                hi_ = m
            it += 1
        t_right = ext(lo_)
    if t_left > t_right:  # collapse bisection fuzz
        mid = ext(0.5 * (float(t_left) + float(t_right)))
        return Interval(mid, mid)
    return Interval(t_left, t_right)


def sublevel_interval(f: ConvexFn, level, tol: float = BRACKET_TOL) -> Interval:
    """Closed sublevel set {theta : f(theta) <= level} of a convex function."""
    if f.pwl is not None:
        return f.pwl.sublevel(level).intersect(f.domain)
    tstar, fstar = minimize(f, tol=tol)
    return _sublevel_given_min(f, level, tstar, fstar, tol)


def _sublevel_given_min(f: ConvexFn, level, tstar: ExtReal, fstar: ExtReal, tol: float) -> Interval:
    level = ext(level)
    if fstar > level + tol:
        return Interval.EMPTY
    if level <= fstar + tol:
        # boundary case: the sublevel set degenerates to (numerically) the
        # argmin; value bisection would be ill-conditioned here
        t = tstar if tstar.finite else (f.domain.lo if tstar == NEG_INF else f.domain.hi)
        return Interval(t, t)
    D = f.domain
    a, b = _probe_range(D)
    anchor = float(tstar) if tstar.finite else (a if tstar == NEG_INF else b)

    if f(a) <= level:
        left = D.lo if not D.lo.finite else ext(a)
    else:
        lo_, hi_ = a, anchor
        it = 0
        while hi_ - lo_ > tol and it < MAX_BISECT:
            m = 0.5 * (lo_ + hi_)
            if f(m) <= level:
                hi_ = m
            else:
                lo_ = m
            it += 1
        left = ext(hi_)

    if f(b) <= level:
        right = D.hi if not D.hi.finite else ext(b)
    else:
        lo_, hi_ = anchor, b
        it = 0
        while hi_ - lo_ > tol and it < MAX_BISECT:
            m = 0.5 * (lo_ + hi_)
            if f(m) <= level:
                lo_ = m
            else:
                hi_ = m
            it += 1
        right = ext(lo_)
    if left > right:
        mid = ext(0.5 * (float(left) + float(right)))
        return Interval(mid, mid)
    return Interval(left, right)


# ---------------------------------------------------------------------------
# combination


def mix(weights: Sequence[float], fns: Sequence[ConvexFn]) -> ConvexFn:
    """Probability-weighted mixture of convex functions.

    Weights must be a probability vector (non-negative, summing to one
    within 1e-12).  Zero-weight components are dropped so that an
    infinite value never meets a zero weight.  Mixing piecewise-linear
    functions yields an exact piecewise-linear mixture.
    """
    if len(weights) != len(fns):
        raise ConstructionError("weights and functions must have equal length")
    if not fns:
        raise ConstructionError("cannot mix zero functions")
    ws = [float(w) for w in weights]
    if any(w < -1e-12 for w in ws):
        raise ConstructionError("negative mixture weight")
    if abs(sum(ws) - 1.0) > 1e-12:
        raise ConstructionError("mixture weights must sum to one")
    pairs = [(w, f) for w, f in zip(ws, fns) if w > 0.0]
    if not pairs:
        raise ConstructionError("all mixture weights vanish")
    dom = pairs[0][1].domain
    for _, f in pairs[1:]:
        dom = dom.intersect(f.domain)
    if dom.empty or not float(dom.length) > 0.0:
        raise ConstructionError("mixture components share no common interval")

    if all(f.pwl is not None for _, f in pairs):
        combined = PiecewiseLinearConvex.combine([w for w, _ in pairs], [f.pwl for _, f in pairs])
        return ConvexFn.from_pwl(combined, domain=dom)

    comps = pairs

    def value(t: float):
        total = ext(0.0)
        for w, f in comps:
            v = f(t)
            if v == INF:
                return math.inf
            total = total + w * v
        return float(total)

    def deriv_plus(t: float):
        total = ext(0.0)
        for w, f in comps:
            total = total + w * f.dplus(t)
        return float(total)

    def deriv_minus(t: float):
        total = ext(0.0)
        for w, f in comps:
            total = total + w * f.dminus(t)
        return float(total)

    return ConvexFn(dom, value, deriv_plus=deriv_plus, deriv_minus=deriv_minus)


def pinball(alpha: float, z: float) -> ConvexFn:
    """The raw pinball loss t -> alpha*[t-z]_+ + (1-alpha)*[z-t]_+."""
    if not 0.0 < alpha < 1.0:
        raise ParameterError("pinball level must be in (0, 1)")
    pwl = PiecewiseLinearConvex(((float(z), 0.0),), ext(-(1.0 - alpha)), ext(alpha))
    return ConvexFn.from_pwl(pwl)
