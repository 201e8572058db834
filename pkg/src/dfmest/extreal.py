"""Extended-real scalars and intervals.

One-sided derivatives of convex functions naturally take values in
[-inf, +inf], and function values in (-inf, +inf].  Rather than letting
IEEE sentinel values float through the code (where ``inf - inf`` silently
becomes NaN), this module wraps them in a small value type whose
arithmetic raises on indeterminate forms.
"""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass

from .errors import ConstructionError, DomainError, IndeterminateFormError

__all__ = [
    "ExtReal",
    "INF",
    "NEG_INF",
    "ext",
    "Interval",
    "interval",
    "REAL_LINE",
    "UNIT",
]


@dataclass(frozen=True, eq=False)
class ExtReal:
    """A point of the extended real line [-inf, +inf].

    Supports ordering and mixed arithmetic with plain numbers.  The
    indeterminate forms ``(+inf) + (-inf)`` and ``0 * inf`` raise
    :class:`IndeterminateFormError` instead of producing NaN.
    """

    value: float

    def __post_init__(self):
        v = float(self.value)
        if math.isnan(v):
            raise ConstructionError("NaN is not an extended real")
        object.__setattr__(self, "value", v)

    @property
    def finite(self) -> bool:
        return math.isfinite(self.value)

    def __float__(self) -> float:
        return self.value

    def __repr__(self) -> str:
        if self.value == math.inf:
            return "ExtReal(+inf)"
        if self.value == -math.inf:
            return "ExtReal(-inf)"
        return f"ExtReal({self.value!r})"

    @staticmethod
    def _coerce(other):
        if isinstance(other, ExtReal):
            return other.value
        if isinstance(other, numbers.Real):
            v = float(other)
            if math.isnan(v):
                raise ConstructionError("NaN is not an extended real")
            return v
        return None

    def __eq__(self, other) -> bool:
        v = self._coerce(other)
        return NotImplemented if v is None else self.value == v

    def __hash__(self) -> int:
        return hash(self.value)

    def __lt__(self, other):
        v = self._coerce(other)
        return NotImplemented if v is None else self.value < v

    def __le__(self, other):
        v = self._coerce(other)
        return NotImplemented if v is None else self.value <= v

    def __gt__(self, other):
        v = self._coerce(other)
        return NotImplemented if v is None else self.value > v

    def __ge__(self, other):
        v = self._coerce(other)
        return NotImplemented if v is None else self.value >= v

    def __neg__(self) -> "ExtReal":
        return ExtReal(-self.value)

    def __abs__(self) -> "ExtReal":
        return ExtReal(abs(self.value))

    def _add(self, v: float) -> "ExtReal":
        if math.isinf(self.value) and math.isinf(v) and self.value != v:
            raise IndeterminateFormError("(+inf) + (-inf)")
        return ExtReal(self.value + v)

    def __add__(self, other):
        v = self._coerce(other)
        return NotImplemented if v is None else self._add(v)

    __radd__ = __add__

    def __sub__(self, other):
        v = self._coerce(other)
        return NotImplemented if v is None else self._add(-v)

    def __rsub__(self, other):
        v = self._coerce(other)
        return NotImplemented if v is None else (-self)._add(v)

    def _mul(self, v: float) -> "ExtReal":
        if (self.value == 0.0 and math.isinf(v)) or (v == 0.0 and math.isinf(self.value)):
            raise IndeterminateFormError("0 * inf")
        return ExtReal(self.value * v)

    def __mul__(self, other):
        v = self._coerce(other)
        return NotImplemented if v is None else self._mul(v)

    __rmul__ = __mul__


INF = ExtReal(math.inf)
NEG_INF = ExtReal(-math.inf)


def ext(x) -> ExtReal:
    """Coerce a number (or ExtReal) to :class:`ExtReal`."""
    return x if isinstance(x, ExtReal) else ExtReal(float(x))


@dataclass(frozen=True)
class Interval:
    """A closed interval of the extended real line, possibly empty.

    The empty interval is the distinguished ``Interval.EMPTY`` singleton;
    a construction with ``lo > hi`` is an error, never a representation
    of emptiness.
    """

    lo: ExtReal
    hi: ExtReal
    empty: bool = False

    def __post_init__(self):
        object.__setattr__(self, "lo", ext(self.lo))
        object.__setattr__(self, "hi", ext(self.hi))
        if not self.empty and self.lo > self.hi:
            raise ConstructionError(
                f"interval endpoints out of order: {float(self.lo)} > {float(self.hi)}"
            )

    def __repr__(self) -> str:
        if self.empty:
            return "Interval.EMPTY"
        return f"Interval({float(self.lo)!r}, {float(self.hi)!r})"

    def contains(self, theta) -> bool:
        if self.empty:
            return False
        t = ext(theta)
        return self.lo <= t <= self.hi

    __contains__ = contains

    def is_subset(self, other: "Interval") -> bool:
        if self.empty:
            return True
        if other.empty:
            return False
        return other.lo <= self.lo and self.hi <= other.hi

    def strictly_inside(self, other: "Interval") -> bool:
        """True when this interval sits in the interior of ``other``."""
        if self.empty:
            return True
        if other.empty:
            return False
        return other.lo < self.lo and self.hi < other.hi

    def intersect(self, other: "Interval") -> "Interval":
        if self.empty or other.empty:
            return Interval.EMPTY
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        if lo > hi:
            return Interval.EMPTY
        return Interval(lo, hi)

    @property
    def length(self) -> ExtReal:
        if self.empty:
            return ExtReal(0.0)
        return self.hi - self.lo

    @property
    def bounded(self) -> bool:
        return (not self.empty) and self.lo.finite and self.hi.finite

    def midpoint(self) -> float:
        if self.empty:
            raise ConstructionError("empty interval has no midpoint")
        if not self.bounded:
            raise DomainError("midpoint of an unbounded interval")
        return 0.5 * (self.lo.value + self.hi.value)

    def clamp(self, theta: float) -> float:
        """Nearest point of the interval to ``theta``."""
        if self.empty:
            raise ConstructionError("cannot clamp into an empty interval")
        if ext(theta) < self.lo:
            return float(self.lo)
        if ext(theta) > self.hi:
            return float(self.hi)
        return float(theta)


Interval.EMPTY = Interval(INF, NEG_INF, empty=True)


def interval(lo, hi) -> Interval:
    """Shorthand constructor coercing plain numbers."""
    return Interval(ext(lo), ext(hi))


REAL_LINE = Interval(NEG_INF, INF)
UNIT = Interval(ExtReal(0.0), ExtReal(1.0))
