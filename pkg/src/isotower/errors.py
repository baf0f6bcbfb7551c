"""Exception hierarchy shared by all isotower modules."""

from __future__ import annotations

from dataclasses import dataclass


class IsotowerError(Exception):
    """Base class for all library errors."""


class ZeroInverse(IsotowerError, ZeroDivisionError):
    """Inversion of the zero element was requested."""


@dataclass(frozen=True)
class ReducibilityWitness:
    """A proper factor of a level's minimal polynomial, found during inversion.

    ``factor`` is a tuple of raw coefficient data over the level below,
    lowest degree first, monic, with 1 <= deg(factor) < deg(minpoly).
    """

    level: int
    factor: tuple


class ReducibilityError(IsotowerError):
    """A tower level turned out to be a quotient by a reducible polynomial.

    Carries a :class:`ReducibilityWitness`; callers doing dynamic evaluation
    catch this, split the level by the factor, and retry.
    """

    def __init__(self, witness: ReducibilityWitness):
        self.witness = witness
        super().__init__(
            f"level {witness.level} minpoly has proper factor of degree "
            f"{len(witness.factor) - 1}"
        )


class PreconditionError(IsotowerError):
    """A documented operation precondition was violated (CLI exit code 3)."""


class AllVanish(PreconditionError):
    """Every form of the system vanishes at the supplied vector."""


class DimensionTooSmall(PreconditionError):
    """System dimension below r(r+1)/2 + 1."""


class DegreeTooLarge(PreconditionError):
    """[K:F] > 8 is not supported by the splitting pipeline."""


class Missing2PartDeclaration(PreconditionError):
    """Even-degree K without a declared maximal 2-subextension chain."""


class DisjointnessViolation(PreconditionError):
    """A declared linearly-disjoint extension collapsed during construction."""


class MemoryGuardExceeded(PreconditionError):
    """Tensor power dimension over K would exceed the 4096 guard."""


class MalformedCertificate(IsotowerError):
    """Certificate or input JSON does not parse to the canonical form (CLI exit 2)."""


class SingularMatrix(IsotowerError):
    """Exact linear solve hit a rank-deficient matrix where full rank was required."""


def named_precondition(exc: PreconditionError) -> str:
    """Name of the violated precondition, for CLI error reporting."""
    return type(exc).__name__


__all__ = [
    "IsotowerError",
    "ZeroInverse",
    "ReducibilityWitness",
    "ReducibilityError",
    "PreconditionError",
    "AllVanish",
    "DimensionTooSmall",
    "DegreeTooLarge",
    "Missing2PartDeclaration",
    "DisjointnessViolation",
    "MemoryGuardExceeded",
    "MalformedCertificate",
    "SingularMatrix",
    "named_precondition",
]
