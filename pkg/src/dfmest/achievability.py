"""Solvability diagnostics for a loss family: signed Lipschitz envelopes,
compact Lipschitz constants, the achievable parameter interval, and
checkable verdicts for the two sufficient conditions (uniform local
Lipschitzness, and a compact set whose minimizer gap is uniformly small).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .convex import BRACKET_TOL, MAX_BISECT, SEARCH_WINDOW
from .errors import DomainError, ParameterError
from .extreal import INF, NEG_INF, ExtReal, Interval, ext
from .families import LossFamily

__all__ = [
    "ConditionReport",
    "signed_lipschitz",
    "compact_lipschitz",
    "achievable_interval",
    "project_achievable",
    "check_condition_c1",
    "check_condition_c2",
]


@dataclass(frozen=True)
class ConditionReport:
    """Outcome of a condition check.

    ``witness`` is present whenever the verdict is "fails" and exhibits the
    failure (a sample point, a parameter, or a compact set, depending on
    the condition).  ``certified_constants`` maps each requested compact
    set, as an ``(a, b)`` pair, to its certified constant and is present
    whenever the verdict is "holds".
    """

    condition: str
    verdict: str
    witness: Optional[object] = None
    certified_constants: Optional[dict] = None
    message: str = ""

    def __post_init__(self):
        if self.condition not in ("C1", "C2"):
            raise ParameterError(f"unknown condition {self.condition!r}")
        if self.verdict not in ("holds", "fails", "inconclusive"):
            raise ParameterError(f"unknown verdict {self.verdict!r}")
        if self.verdict == "fails" and self.witness is None:
            raise ParameterError("failing verdict requires a witness")
        if self.verdict == "holds" and self.certified_constants is None:
            raise ParameterError("holding verdict requires certified constants")

    def to_dict(self) -> dict:
        def enc(x):
            if isinstance(x, ExtReal):
                x = float(x)
            if isinstance(x, float):
                if x == math.inf:
                    return "inf"
                if x == -math.inf:
                    return "-inf"
            if isinstance(x, (tuple, list)):
                return [enc(v) for v in x]
            return x

        constants = None
        if self.certified_constants is not None:
            constants = [
                {"set": enc(list(k)), "value": enc(v)}
                for k, v in self.certified_constants.items()
            ]
        return {
            "condition": self.condition,
            "verdict": self.verdict,
            "witness": enc(self.witness),
            "constants": constants,
            "message": self.message,
        }


def signed_lipschitz(family: LossFamily, theta: float) -> tuple:
    """The pair (inf over z of D- loss_z, sup over z of D+ loss_z) at an
    interior parameter point; both are non-decreasing functions of theta."""
    return family.inf_dminus(theta), family.sup_dplus(theta)


def compact_lipschitz(family: LossFamily, inner: Interval) -> ExtReal:
    """Uniform Lipschitz constant of the family over a compact interval
    strictly inside the parameter domain.

    By monotonicity of the signed envelopes the supremum over the interval
    is attained at its endpoints: max{lambda_plus(b), -lambda_minus(a)}.
    """
    if inner.empty or not inner.bounded:
        raise DomainError("need a non-empty compact interval")
    if not inner.strictly_inside(family.theta_domain):
        raise DomainError(f"{inner} is not strictly inside {family.theta_domain}")
    a, b = float(inner.lo), float(inner.hi)
    lam_plus = family.sup_dplus(b)
    lam_minus = family.inf_dminus(a)
    return max(lam_plus, -lam_minus)


def _interior_probes(dom: Interval) -> tuple:
    lo, hi = dom.lo, dom.hi
    if lo.finite:
        a = float(lo) + BRACKET_TOL * max(1.0, abs(float(lo)))
    else:
        a = -SEARCH_WINDOW
    if hi.finite:
        b = float(hi) - BRACKET_TOL * max(1.0, abs(float(hi)))
    else:
        b = SEARCH_WINDOW
    if not a < b:
        raise DomainError("parameter domain interior too thin to probe")
    return a, b


def _threshold(predicate, a: float, b: float, find_first_true: bool) -> float:
    """Bisect a monotone (false then true) boolean map on [a, b] down to
    BRACKET_TOL; the caller guarantees predicate(a) != predicate(b)."""
    lo, hi = a, b
    it = 0
    while hi - lo > BRACKET_TOL and it < MAX_BISECT:
        m = 0.5 * (lo + hi)
        if predicate(m):
            hi = m
        else:
            lo = m
        it += 1
    return hi if find_first_true else lo


def achievable_interval(family: LossFamily) -> Interval:
    """The interval of parameters achievable as population minimizers.

    theta_min is the infimum of {theta : sup_dplus(theta) > 0} (the right
    endpoint of the domain when that set is empty) and theta_max the
    supremum of {theta : inf_dminus(theta) < 0} (the left endpoint when
    empty).  Both sign maps are monotone, so bisection locates them.  When
    theta_max < theta_min every loss is constant on [theta_max, theta_min]
    and the ordered interval is returned: its points minimize every loss.
    """
    dom = family.theta_domain
    a, b = _interior_probes(dom)

    def rising(t: float) -> bool:
        return family.sup_dplus(t) > 0.0

    def falling(t: float) -> bool:
        return family.inf_dminus(t) < 0.0

    if not rising(b):
        theta_min = dom.hi
    elif rising(a):
        theta_min = dom.lo if dom.lo.finite else NEG_INF
    else:
        theta_min = ext(_threshold(rising, a, b, find_first_true=True))

    if falling(b):
        theta_max = dom.hi if dom.hi.finite else INF
    elif not falling(a):
        theta_max = dom.lo
    else:
        # sup of a true-then-false set: bisect on the negation
        theta_max = ext(_threshold(lambda t: not falling(t), a, b, find_first_true=False))

    lo, hi = min(theta_min, theta_max), max(theta_min, theta_max)
    return Interval(lo, hi)


def project_achievable(family: LossFamily, theta: float) -> float:
    """Clamp a parameter into the achievable interval; the projection never
    increases any individual loss.  In the degenerate ordered case every
    point of the returned interval minimizes every loss, so clamping is
    still valid."""
    return achievable_interval(family).clamp(float(theta))


def check_condition_c1(family: LossFamily, inner_compacts: Sequence[Interval]) -> ConditionReport:
    """Uniform local Lipschitzness: every requested compact interval
    strictly inside the domain must carry a finite Lipschitz constant."""
    constants = {}
    for inner in inner_compacts:
        lam = compact_lipschitz(family, inner)
        key = (float(inner.lo), float(inner.hi))
        if not lam.finite:
            return ConditionReport(
                "C1",
                "fails",
                witness=key,
                message=f"{family.name}: infinite Lipschitz constant on {inner}",
            )
        constants[key] = float(lam)
    return ConditionReport(
        "C1",
        "holds",
        certified_constants=constants,
        message=f"{family.name}: finite Lipschitz constants on all {len(constants)} compacts",
    )


def check_condition_c2(family: LossFamily, eps: float, probe: Interval) -> ConditionReport:
    """Uniformly small minimizer gap: the supremum over samples of the gap
    between the best loss value on the probe compact and the global best
    must not exceed eps.  Without a gap-supremum oracle the verdict is
    inconclusive."""
    eps = float(eps)
    if eps <= 0.0:
        raise ParameterError("gap tolerance must be positive")
    if probe.empty:
        raise ParameterError("probe interval is empty")
    result = family.gap_sup(probe, eps)
    if result is None:
        return ConditionReport(
            "C2",
            "inconclusive",
            message=f"{family.name}: no gap-supremum oracle for this sample space",
        )
    gap_value, witness_z = result
    key = (float(probe.lo), float(probe.hi))
    # tiny additive slack so closed-form boundary cases are not lost to
    # floating-point rounding of the oracle
    if float(gap_value) <= eps + 1e-9:
        return ConditionReport(
            "C2",
            "holds",
            certified_constants={key: float(gap_value)},
            message=f"{family.name}: gap supremum {float(gap_value):.6g} <= {eps:.6g}",
        )
    return ConditionReport(
        "C2",
        "fails",
        witness=witness_z,
        message=f"{family.name}: gap at z={witness_z} exceeds {eps:.6g}",
    )
