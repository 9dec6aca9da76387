"""mtreg: exact verification of unit criteria for equivariant regulators
built from height pairings, plus numerical Mazur-Tate pairing evaluation
over small residue fields with an algebraic cross-checking oracle."""

from .exactnum import (
    ComplexApprox,
    CycloNum,
    Rational,
    ResidueInt,
    cyclo_invert,
    galois_map,
    rational_reconstruct,
)
from .groupring import (
    AugClass,
    Character,
    GroupData,
    GroupRingElem,
    apply_character,
    fourier_invert,
    ideal_membership,
    is_unit_zp,
    project_rho,
)

__all__ = [
    "AugClass",
    "Character",
    "ComplexApprox",
    "CycloNum",
    "GroupData",
    "GroupRingElem",
    "Rational",
    "ResidueInt",
    "apply_character",
    "cyclo_invert",
    "fourier_invert",
    "galois_map",
    "ideal_membership",
    "is_unit_zp",
    "project_rho",
    "rational_reconstruct",
]

__version__ = "0.1.0"
