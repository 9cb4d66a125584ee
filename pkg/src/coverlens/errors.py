"""Shared exception types."""
from __future__ import annotations


class CoverlensError(Exception):
    """Base class for all package errors."""


class IndeterminateProductError(CoverlensError, ArithmeticError):
    """Raised for 0 * infinity, which has no consistent value."""


class AmbientMismatchError(CoverlensError, ValueError):
    """A point, subset or family does not belong to the ambient it was used with."""


class NotACoveringFamilyError(CoverlensError):
    """A family was required to cover a subset but does not.

    Carries an uncovered witness point.
    """

    def __init__(self, witness, message: str = "family does not cover the subset"):
        super().__init__(f"{message} (uncovered witness: {witness!r})")
        self.witness = witness


class NonInjectiveMapError(CoverlensError, ValueError):
    """A map that must be injective collapses two points."""
