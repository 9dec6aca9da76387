"""Tame local symbols and the local Tate pairing on Kummer classes.

Places are unramified with residue characteristic ell != p, so an element
of F_w^x/(F_w^x)^p is completely described by its valuation mod p together
with the residue unit class mod p-th powers; the latter is stored as an
exponent of the canonical multiplicative generator of the residue field.

The tame Hilbert symbol {a, b} of such a place is evaluated through the
classical formula

    omega((-1)^(v(a) v(b)) * a^v(b) / b^v(a)) ^ ((q-1)/p),

discrete-logged against the reference root zeta_res = e_p(T, S) attached to
the place's torsion basis.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional

from .errors import NotRootOfUnity, UnsupportedPlace
from .ffec import CurveFq, ECPointFq, FqElem, TorsionBasis, descent_eval, find_p_torsion_basis


@dataclass(frozen=True)
class LocalPlace:
    """Good-reduction data at a tame place: residue field, reduced curve,
    p-torsion basis and the distinguished root of unity zeta_res."""

    label: str
    p: int
    curve: CurveFq
    basis: TorsionBasis

    def __post_init__(self):
        field = self.curve.field
        if field.ell == self.p:
            raise UnsupportedPlace(f"place {self.label}: residue characteristic equals p")
        if (field.q - 1) % self.p != 0:
            raise UnsupportedPlace(f"place {self.label}: p does not divide q - 1")

    @classmethod
    def create(cls, label: str, p: int, curve: CurveFq) -> "LocalPlace":
        return cls(label, p, curve, find_p_torsion_basis(curve, p))

    @property
    def field(self):
        return self.curve.field

    def unit_class_of(self, x: FqElem) -> "LocalUnitClass":
        """Class of a residue unit, valuation zero."""
        return LocalUnitClass(self.p, 0, self.field.dlog(x) % self.p)

    def uniformizer_class(self) -> "LocalUnitClass":
        return LocalUnitClass(self.p, 1, 0)


@dataclass(frozen=True)
class LocalUnitClass:
    """Element of F_w^x/(F_w^x)^p: (valuation mod p, unit exponent mod p).

    The unit exponent is taken against the canonical generator of the
    residue field's multiplicative group.
    """

    p: int
    v: int
    u_exp: int

    def __post_init__(self):
        object.__setattr__(self, "v", self.v % self.p)
        object.__setattr__(self, "u_exp", self.u_exp % self.p)

    def __mul__(self, other: "LocalUnitClass") -> "LocalUnitClass":
        if self.p != other.p:
            raise ValueError("mixed primes")
        return LocalUnitClass(self.p, self.v + other.v, self.u_exp + other.u_exp)

    def inverse(self) -> "LocalUnitClass":
        return LocalUnitClass(self.p, -self.v, -self.u_exp)

    def __pow__(self, k: int) -> "LocalUnitClass":
        return LocalUnitClass(self.p, k * self.v, k * self.u_exp)

    def is_trivial(self) -> bool:
        return self.v == 0 and self.u_exp == 0


@dataclass(frozen=True)
class LocalKummerElem:
    """Map from torsion labels (at least S and T) to local unit classes."""

    classes: tuple

    @classmethod
    def of(cls, mapping: Mapping[str, LocalUnitClass]) -> "LocalKummerElem":
        if "S" not in mapping or "T" not in mapping:
            raise ValueError("Kummer element must cover the labels S and T")
        return cls(tuple(sorted(mapping.items())))

    def at(self, label: str) -> LocalUnitClass:
        for key, val in self.classes:
            if key == label:
                return val
        raise KeyError(label)

    def __mul__(self, other: "LocalKummerElem") -> "LocalKummerElem":
        mine = dict(self.classes)
        theirs = dict(other.classes)
        if set(mine) != set(theirs):
            raise ValueError("label sets differ")
        return LocalKummerElem.of({k: mine[k] * theirs[k] for k in mine})

    @classmethod
    def trivial(cls, p: int) -> "LocalKummerElem":
        one = LocalUnitClass(p, 0, 0)
        return cls.of({"S": one, "T": one})


def tame_hilbert(a: LocalUnitClass, b: LocalUnitClass, place: LocalPlace) -> int:
    """Exponent k with {a, b}_w = zeta_res^k for the tame symbol."""
    p = place.p
    field = place.field
    g = field.multiplicative_generator()
    a_unit = g ** a.u_exp
    b_unit = g ** b.u_exp
    minus_one = -field.one()
    residue = (minus_one ** (a.v * b.v)) * (a_unit ** b.v) / (b_unit ** a.v)
    symbol = residue ** ((field.q - 1) // p)
    return xi(place, symbol)


def xi(place: LocalPlace, mu_element: FqElem) -> int:
    """Discrete log against zeta_res on mu_p; xi(zeta_res) = 1."""
    p = place.p
    if mu_element ** p != place.field.one():
        raise NotRootOfUnity(f"{mu_element} is not a {p}-th root of unity")
    acc = place.field.one()
    for k in range(p):
        if acc == mu_element:
            return k
        acc = acc * place.basis.zeta_res
    raise NotRootOfUnity("reference root does not generate mu_p")


def local_tate(a_bar: LocalKummerElem, b_bar: LocalKummerElem, place: LocalPlace) -> int:
    """xi({a(S), b(T)} / {a(T), b(S)}) as an exponent mod p."""
    k1 = tame_hilbert(a_bar.at("S"), b_bar.at("T"), place)
    k2 = tame_hilbert(a_bar.at("T"), b_bar.at("S"), place)
    return (k1 - k2) % place.p


def kummer_image(place: LocalPlace, q_point: ECPointFq) -> LocalKummerElem:
    """Local Kummer class of a point of the reduced curve, described by its
    descent evaluations against the basis functions f_S and f_T."""
    if q_point.is_infinity:
        return LocalKummerElem.trivial(place.p)
    classes = {}
    for label, base in (("S", place.basis.S), ("T", place.basis.T)):
        exp = descent_eval(place.curve, base, q_point, place.p, place.basis.zeta_res)
        u_exp = (exp * _zeta_generator_exponent(place)) % place.p
        classes[label] = LocalUnitClass(place.p, 0, u_exp)
    return LocalKummerElem.of(classes)


def _zeta_generator_exponent(place: LocalPlace) -> int:
    """Exponent z with zeta_res = g^(z * (q-1)/p) for the canonical
    generator g; converts descent exponents (powers of zeta_res) into unit
    exponents of g mod p."""
    field = place.field
    dlog = field.dlog(place.basis.zeta_res)
    step = (field.q - 1) // place.p
    z, rem = divmod(dlog, step)
    if rem != 0:
        raise NotRootOfUnity("zeta_res is not in mu_p")
    return z % place.p
