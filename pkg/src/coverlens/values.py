"""Exact totally ordered arithmetic for nonnegative square roots of rationals, plus infinity.

Every distance, diameter, mesh and Lebesgue number in this package is a
``Value``: either ``sqrt(radicand)`` for a nonnegative rational radicand, or
``+infinity``.  A plain rational q is stored with radicand q*q.  Comparisons
are decided on radicands (squaring is order preserving on nonnegatives), so
ordering, min/max and scaling by a nonnegative rational stay exact.

Sums of two Values are deliberately not supported: everything computed here is
a min/max combination of distances, never a sum of two irrationals.  This
keeps the type closed under every operation it offers.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from math import isqrt
from typing import Optional, Union

from .errors import IndeterminateProductError

RationalLike = Union[Fraction, int, str]


def as_fraction(q: RationalLike) -> Fraction:
    """Coerce int/str/Fraction input to an exact Fraction."""
    return q if isinstance(q, Fraction) else Fraction(q)


def exact_sqrt(q: Fraction) -> Optional[Fraction]:
    """Return the rational square root of q >= 0, or None if it is irrational."""
    rn, rd = isqrt(q.numerator), isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None


@total_ordering
@dataclass(frozen=True, slots=True)
class Value:
    """sqrt(radicand) for a rational radicand >= 0, or +infinity (radicand None)."""

    radicand: Optional[Fraction]

    def __post_init__(self):
        if self.radicand is not None:
            rad = as_fraction(self.radicand)
            if rad < 0:
                raise ValueError(f"negative radicand: {rad}")
            object.__setattr__(self, "radicand", rad)

    # ---- constructors ----

    @classmethod
    def of(cls, q: RationalLike) -> "Value":
        """The rational q >= 0 itself (stored with radicand q*q)."""
        f = as_fraction(q)
        if f < 0:
            raise ValueError(f"negative value: {f}")
        return cls(f * f)

    @classmethod
    def sqrt(cls, q: RationalLike) -> "Value":
        """sqrt(q) for rational q >= 0."""
        return cls(as_fraction(q))

    @classmethod
    def infinite(cls) -> "Value":
        return cls(None)

    # ---- predicates and conversions ----

    @property
    def is_infinite(self) -> bool:
        return self.radicand is None

    @property
    def is_rational_exact(self) -> bool:
        """True iff the value is finite and sqrt(radicand) is rational."""
        return self.radicand is not None and exact_sqrt(self.radicand) is not None

    def as_fraction(self) -> Fraction:
        """The exact rational represented; raises unless rational-exact."""
        if self.radicand is None:
            raise ValueError("infinite value has no rational form")
        root = exact_sqrt(self.radicand)
        if root is None:
            raise ValueError(f"sqrt({self.radicand}) is irrational")
        return root

    def __float__(self) -> float:
        if self.radicand is None:
            return float("inf")
        return float(self.radicand) ** 0.5

    # ---- order ----

    def __lt__(self, other: "Value") -> bool:
        if not isinstance(other, Value):
            return NotImplemented
        if self.radicand is None:
            return False
        if other.radicand is None:
            return True
        return self.radicand < other.radicand

    # ---- arithmetic ----

    def scale(self, c: RationalLike) -> "Value":
        """c * self for a rational c >= 0.  0 * infinity is an error."""
        f = as_fraction(c)
        if f < 0:
            raise ValueError(f"negative scale factor: {f}")
        return self.scale_sq(f * f)

    def scale_sq(self, c_sq: RationalLike) -> "Value":
        """sqrt(c_sq) * self for a rational c_sq >= 0.

        This is what transport-bound checks use: a factor like lambda*R is
        generally irrational, but its square is rational, and scaling a Value
        multiplies the radicand by exactly that square.
        """
        f = as_fraction(c_sq)
        if f < 0:
            raise ValueError(f"negative squared scale factor: {f}")
        if self.radicand is None:
            if f == 0:
                raise IndeterminateProductError("0 * infinity is indeterminate")
            return INF
        return Value(self.radicand * f)

    # ---- text form ----

    def serialize(self) -> str:
        """"p/q" when rational-exact, "sqrt(p/q)" otherwise, "inf" for infinity."""
        if self.radicand is None:
            return "inf"
        root = exact_sqrt(self.radicand)
        if root is not None:
            return str(root)
        return f"sqrt({self.radicand})"

    @classmethod
    def parse(cls, text: str) -> "Value":
        s = text.strip()
        if s == "inf":
            return INF
        if s.startswith("sqrt(") and s.endswith(")"):
            return cls.sqrt(Fraction(s[5:-1]))
        return cls.of(Fraction(s))

    def __str__(self) -> str:
        return self.serialize()

    def __repr__(self) -> str:
        return f"Value({self.serialize()!r})"


ZERO = Value.of(0)
INF = Value.infinite()
