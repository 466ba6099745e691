"""Exception types shared across the package."""

from __future__ import annotations


class LedgerObataError(Exception):
    """Base class for all errors raised by this package."""


class InputError(LedgerObataError, ValueError):
    """Invalid user-supplied data (malformed matrix, bad JSON, bad flag)."""


class InvalidMetricError(InputError):
    """Matrix fails the structural requirements of a metric representation."""


class StructureConstantError(InputError):
    """Structure-constant table is not a compact simple Lie algebra."""


class SelfSaturationError(LedgerObataError):
    """Subspace is not closed under diamond products of orthogonal pairs.

    Carries the witness pair of orthonormal basis vectors whose product
    escapes the subspace.
    """

    def __init__(self, message: str, witness: tuple | None = None):
        super().__init__(message)
        self.witness = witness


class ClosureError(LedgerObataError):
    """Subspace is not closed under the diamond product.

    ``witness`` holds a pair of basis vectors violating closure.
    """

    def __init__(self, message: str, witness: tuple | None = None):
        super().__init__(message)
        self.witness = witness


class ParameterError(InputError):
    """Family parameters outside their admissible range."""
