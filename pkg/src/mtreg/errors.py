"""Exception taxonomy shared across the package.

Every failure mode that callers are expected to catch gets its own class;
all of them derive from :class:`MtregError` so a CLI layer can map any
library failure to a diagnostic exit code.
"""

from __future__ import annotations


class MtregError(Exception):
    """Base class for all library errors."""


class ZeroInversion(MtregError):
    """Attempt to invert zero in a field."""


class BadExponent(MtregError):
    """Galois exponent not coprime to the residue characteristic."""


class NotReal(MtregError):
    """Complex value has imaginary part beyond the allowed tolerance."""


class NoConvergent(MtregError):
    """No continued-fraction convergent satisfies the reconstruction bound."""


class PrecisionExhausted(MtregError):
    """Declared error intervals are too wide to decide a comparison."""


class NotGaloisStable(MtregError):
    """Exact Fourier inversion produced irrational coefficients."""


class NotPIntegral(MtregError):
    """A coefficient has denominator divisible by the working prime."""


class NotFullTorsion(MtregError):
    """The full p-torsion of the curve is not rational over the field."""


class DegenerateEvaluation(MtregError):
    """All auxiliary shifts for a function evaluation failed."""


class NotRootOfUnity(MtregError):
    """Element is not a p-th root of unity."""


class UnsupportedPlace(MtregError):
    """Place is ramified or has residue characteristic equal to p."""


class BadReduction(MtregError):
    """A denominator or evaluation vanishes at the reduction map."""


class NoPreimage(MtregError):
    """The trace operator linear system is inconsistent."""


class InconsistentPlaces(MtregError):
    """Place data required by the pairing formula is missing."""


class ShapeError(MtregError):
    """Matrix or table does not match the declared point structure."""


class LiftFailure(MtregError):
    """A lift required by an exact sequence does not exist."""


class NonUnitDenominator(MtregError):
    """A character minor that must be non-zero vanished."""


class IdealViolation(MtregError):
    """Two matrices do not satisfy the same defining congruences."""


class NonUnitEpsilon(MtregError):
    """A character minor of the solved matrix vanishes."""


class TableLevelMismatch(MtregError):
    """Pairing table entry carries the wrong level."""


class DegenerateRegulator(MtregError):
    """A character component of the height matrix is singular."""


class SchemaError(MtregError):
    """Case file does not conform to the mtreg-case/1 schema."""

    def __init__(self, path: str, message: str):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}")
