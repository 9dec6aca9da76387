"""Cyclic p-group G, group rings D[G], characters and augmentation classes.

The group is written multiplicatively with a fixed generator sigma; an
element of D[G] stores the coefficient of sigma^i at index i.  Coefficients
may be ints, Fractions, ResidueInts, CycloNums or ComplexApprox values; all
operations are coefficient-domain agnostic.

J_r denotes the subgroup of order p^(n-r) generated by sigma^(p^r) and
Gamma_r the quotient G/J_r, itself cyclic of order p^r.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional

from . import plinalg
from .errors import (
    NotGaloisStable,
    NotPIntegral,
    PrecisionExhausted,
)
from .exactnum import ComplexApprox, CycloNum, ResidueInt, is_prime, rational_reconstruct


@dataclass(frozen=True)
class GroupData:
    """Cyclic group of order p^n with distinguished generator sigma.

    Quotients Gamma_r are represented by GroupData(p, r); n = 0 is allowed
    so that Gamma_0 (the trivial group) has a carrier.
    """

    p: int
    n: int

    def __post_init__(self):
        if not is_prime(self.p) or self.p == 2:
            raise ValueError(f"p must be an odd prime, got {self.p}")
        if self.n < 0:
            raise ValueError("n must be non-negative")

    @property
    def order(self) -> int:
        return self.p ** self.n

    def subgroup_order(self, r: int) -> int:
        self._check_level(r)
        return self.p ** (self.n - r)

    def quotient(self, r: int) -> "GroupData":
        self._check_level(r)
        return GroupData(self.p, r)

    def _check_level(self, r: int):
        if not 0 <= r <= self.n:
            raise ValueError(f"level {r} out of range [0, {self.n}]")

    def characters(self) -> list["Character"]:
        return [Character(self, a) for a in range(self.order)]


@dataclass(frozen=True)
class Character:
    """Character psi of G determined by psi(sigma) = zeta^a."""

    group: GroupData
    a: int

    def __post_init__(self):
        object.__setattr__(self, "a", self.a % self.group.order)

    @property
    def t(self) -> int:
        """Level t with ker(psi) = J_t."""
        a, n, p = self.a, self.group.n, self.group.p
        if a == 0:
            return 0
        v = 0
        while a % p == 0:
            a //= p
            v += 1
        return n - v

    @property
    def is_trivial(self) -> bool:
        return self.a == 0

    def contragredient(self) -> "Character":
        return Character(self.group, -self.a)

    def value_exact(self, i: int) -> CycloNum:
        return CycloNum.zeta_pow(self.group.p, self.group.n, self.a * i)

    def value_float(self, i: int, j_idx: int = 1) -> ComplexApprox:
        return ComplexApprox.unit_root(self.group.order, j_idx * self.a * i)


class GroupRingElem:
    """Element of D[G]; coefficient of sigma^i at index i."""

    __slots__ = ("group", "coeffs")

    def __init__(self, group: GroupData, coeffs: Iterable):
        self.group = group
        self.coeffs = tuple(coeffs)
        if len(self.coeffs) != group.order:
            raise ValueError(f"expected {group.order} coefficients, got {len(self.coeffs)}")

    @classmethod
    def zero(cls, group: GroupData, domain_zero=0) -> "GroupRingElem":
        return cls(group, [domain_zero] * group.order)

    @classmethod
    def one(cls, group: GroupData, domain_one=1, domain_zero=0) -> "GroupRingElem":
        coeffs = [domain_zero] * group.order
        coeffs[0] = domain_one
        return cls(group, coeffs)

    @classmethod
    def sigma_power(cls, group: GroupData, i: int, domain_one=1, domain_zero=0) -> "GroupRingElem":
        coeffs = [domain_zero] * group.order
        coeffs[i % group.order] = domain_one
        return cls(group, coeffs)

    @classmethod
    def from_dict(cls, group: GroupData, d: Mapping[int, object], domain_zero=0) -> "GroupRingElem":
        coeffs = [domain_zero] * group.order
        for i, c in d.items():
            coeffs[i % group.order] = coeffs[i % group.order] + c
        return cls(group, coeffs)

    @classmethod
    def trace_subgroup(cls, group: GroupData, r: int, domain_one=1, domain_zero=0) -> "GroupRingElem":
        """Tr_{J_r} = sum of sigma^(p^r * t) over t."""
        group._check_level(r)
        coeffs = [domain_zero] * group.order
        step = group.p ** r
        for t in range(group.subgroup_order(r)):
            coeffs[(step * t) % group.order] = domain_one
        return cls(group, coeffs)

    def _check_compat(self, other: "GroupRingElem"):
        if self.group != other.group:
            raise ValueError("group mismatch")

    def __add__(self, other: "GroupRingElem") -> "GroupRingElem":
        self._check_compat(other)
        return GroupRingElem(self.group, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: "GroupRingElem") -> "GroupRingElem":
        self._check_compat(other)
        return GroupRingElem(self.group, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self) -> "GroupRingElem":
        return GroupRingElem(self.group, [-a for a in self.coeffs])

    def __mul__(self, other) -> "GroupRingElem":
        if not isinstance(other, GroupRingElem):
            return self.scale(other)
        self._check_compat(other)
        order = self.group.order
        out = [None] * order
        for k in range(order):
            acc = None
            for i, a in enumerate(self.coeffs):
                term = a * other.coeffs[(k - i) % order]
                acc = term if acc is None else acc + term
            out[k] = acc
        return GroupRingElem(self.group, out)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c) -> "GroupRingElem":
        return GroupRingElem(self.group, [a * c for a in self.coeffs])

    def __eq__(self, other) -> bool:
        if not isinstance(other, GroupRingElem):
            return NotImplemented
        return self.group == other.group and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.group, self.coeffs))

    def augmentation(self):
        acc = self.coeffs[0]
        for c in self.coeffs[1:]:
            acc = acc + c
        return acc

    def map_coeffs(self, f) -> "GroupRingElem":
        return GroupRingElem(self.group, [f(c) for c in self.coeffs])

    def int_coeffs(self) -> list[int]:
        out = []
        for c in self.coeffs:
            if isinstance(c, ResidueInt):
                out.append(c.value)
            elif isinstance(c, Fraction):
                if c.denominator != 1:
                    raise ValueError("non-integer coefficient")
                out.append(int(c))
            elif isinstance(c, int):
                out.append(c)
            else:
                raise ValueError(f"cannot read integer from {type(c).__name__}")
        return out

    def __repr__(self):
        return f"GroupRingElem({self.group.p}^{self.group.n}, {list(self.coeffs)})"


def project_rho(x: GroupRingElem, r: int) -> GroupRingElem:
    """Canonical projection D[G] -> D[Gamma_r], sigma^i -> sigmabar^(i mod p^r)."""
    x.group._check_level(r)
    quot = x.group.quotient(r)
    size = quot.order
    out: list = [None] * size
    for i, c in enumerate(x.coeffs):
        k = i % size
        out[k] = c if out[k] is None else out[k] + c
    return GroupRingElem(quot, out)


def apply_character(x: GroupRingElem, psi: Character, j_idx: Optional[int] = None):
    """Evaluate psi coefficient-wise; exact coefficients yield a CycloNum,
    ComplexApprox coefficients (or an explicit j_idx) yield a ComplexApprox."""
    group = psi.group
    if x.group != group:
        raise ValueError("element group incompatible with character group")
    float_mode = j_idx is not None or any(isinstance(c, ComplexApprox) for c in x.coeffs)
    if float_mode:
        j = 1 if j_idx is None else j_idx
        total = ComplexApprox.exact(0.0)
        for i, c in enumerate(x.coeffs):
            ca = c if isinstance(c, ComplexApprox) else ComplexApprox.from_fraction(Fraction(c))
            total = total + ca * psi.value_float(i, j)
        return total
    total = CycloNum.zero(group.p, group.n)
    for i, c in enumerate(x.coeffs):
        if isinstance(c, CycloNum):
            total = total + c * psi.value_exact(i)
        else:
            if c == 0:
                continue
            total = total + psi.value_exact(i) * Fraction(c)
    return total


def is_unit_zp(x: GroupRingElem) -> bool:
    """Unit test in Z_p[G]: augmentation not divisible by p.

    Requires p-integral coefficients (ints, or Fractions with denominator
    coprime to p); raises NotPIntegral otherwise.
    """
    p = x.group.p
    total = Fraction(0)
    for c in x.coeffs:
        q = Fraction(c) if not isinstance(c, Fraction) else c
        if q.denominator % p == 0:
            raise NotPIntegral(f"coefficient {q} is not p-integral at p={p}")
        total += q
    # reduce the augmentation mod p in Z_(p): numerator * denominator^(-1)
    return (total.numerator * pow(total.denominator, -1, p)) % p != 0


def fourier_invert(
    values: Mapping[Character, object],
    group: GroupData,
    j_idx: int = 1,
    tol: float = 1e-8,
    max_den: int = 10 ** 9,
) -> GroupRingElem:
    """Invert a character-indexed family back to a rational group-ring element.

    Exact mode (CycloNum values): the coefficient p^(-n) sum_psi x_psi
    psibar(g) must be rational for every g, else NotGaloisStable.  Float mode
    (ComplexApprox values): coefficients are rationally reconstructed at the
    given tolerance, else PrecisionExhausted.
    """
    elem, _ = fourier_invert_detailed(values, group, j_idx=j_idx, tol=tol, max_den=max_den)
    return elem


def fourier_invert_detailed(
    values: Mapping[Character, object],
    group: GroupData,
    j_idx: int = 1,
    tol: float = 1e-8,
    max_den: int = 10 ** 9,
):
    order = group.order
    by_a = {psi.a: v for psi, v in values.items()}
    if len(by_a) != order or set(by_a) != set(range(order)):
        raise ValueError("values must be supplied for all characters")
    float_mode = any(isinstance(v, ComplexApprox) for v in by_a.values())
    coeffs = []
    margins = []
    inv_order = Fraction(1, order)
    for g in range(order):
        if float_mode:
            total = ComplexApprox.exact(0.0)
            for a in range(order):
                v = by_a[a]
                if isinstance(v, ComplexApprox):
                    va = v
                elif isinstance(v, CycloNum):
                    va = v.embed(j_idx)
                else:
                    va = ComplexApprox.from_fraction(Fraction(v))
                total = total + va * ComplexApprox.unit_root(order, -j_idx * a * g)
            total = total.scale(inv_order)
            if total.err > tol:
                raise PrecisionExhausted(
                    f"coefficient of sigma^{g}: error bound {total.err:.3e} exceeds tol {tol}"
                )
            if abs(total.im) > tol:
                raise PrecisionExhausted(
                    f"coefficient of sigma^{g}: imaginary part {total.im:.3e} exceeds tol {tol}"
                )
            try:
                q = rational_reconstruct(total, tol, max_den)
            except Exception as exc:
                raise PrecisionExhausted(f"coefficient of sigma^{g}: {exc}") from exc
            coeffs.append(q)
            margins.append(float(Fraction(tol) - abs(Fraction(total.re) - q)))
        else:
            total = CycloNum.zero(group.p, group.n)
            for a in range(order):
                v = by_a[a]
                if not isinstance(v, CycloNum):
                    v = CycloNum.rational(group.p, group.n, v)
                total = total + v * CycloNum.zeta_pow(group.p, group.n, -a * g)
            total = total * inv_order
            if not total.is_rational():
                raise NotGaloisStable(f"coefficient of sigma^{g} is irrational: {total}")
            coeffs.append(total.rational_value())
            margins.append(math.inf)
    return GroupRingElem(group, coeffs), margins


def ideal_membership(x: GroupRingElem, r: int, precision: Optional[int] = None) -> bool:
    """Decide x mod p^M in (sigma^(p^r) - 1) Z/p^M[G] + Tr_{J_r} Z/p^M[G].

    Exact linear algebra over Z/p^M; default precision M = n + 6.
    """
    group = x.group
    group._check_level(r)
    p, order = group.p, group.order
    big_m = precision if precision is not None else group.n + 6
    gen1 = GroupRingElem.sigma_power(group, p ** r) - GroupRingElem.one(group)
    gen2 = GroupRingElem.trace_subgroup(group, r)
    cols = []
    for gen in (gen1, gen2):
        base = gen.int_coeffs()
        for t in range(order):
            cols.append([base[(k - t) % order] for k in range(order)])
    matrix = [[cols[j][i] for j in range(len(cols))] for i in range(order)]
    target = [c % (p ** big_m) for c in x.int_coeffs()]
    return plinalg.solve_mod_prime_power(matrix, target, p, big_m) is not None


@dataclass(frozen=True)
class AugClass:
    """Element of I_p(J_level)/I_p(J_level)^2 for the cyclic group G.

    Stored as the exponent c against the canonical generator, i.e. the class
    of c * (sigma^(p^level) - 1); c is reduced modulo p^(n - level), the
    order of J_level.  The isomorphism J_level -> I/I^2 sends g to g - 1, so
    the group law is addition of exponents.
    """

    group: GroupData
    level: int
    exponent: int

    def __post_init__(self):
        self.group._check_level(self.level)
        object.__setattr__(self, "exponent", self.exponent % self.modulus)

    @property
    def modulus(self) -> int:
        return self.group.subgroup_order(self.level)

    def __add__(self, other: "AugClass") -> "AugClass":
        self._check(other)
        return AugClass(self.group, self.level, self.exponent + other.exponent)

    def __neg__(self) -> "AugClass":
        return AugClass(self.group, self.level, -self.exponent)

    def __sub__(self, other: "AugClass") -> "AugClass":
        return self + (-other)

    def scale(self, c: int) -> "AugClass":
        return AugClass(self.group, self.level, c * self.exponent)

    def _check(self, other: "AugClass"):
        if (self.group, self.level) != (other.group, other.level):
            raise ValueError("augmentation classes live at different levels")

    def is_zero(self) -> bool:
        return self.exponent == 0

    @classmethod
    def from_group_element(cls, group: GroupData, level: int, exponent_of_generator: int) -> "AugClass":
        """Class of g - 1 for g = (sigma^(p^level))^exponent_of_generator."""
        return cls(group, level, exponent_of_generator)
