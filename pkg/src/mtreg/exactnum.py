"""Exact and interval scalar arithmetic.

Coefficient domains used throughout the package:

* rationals (``fractions.Fraction``),
* ``CycloNum``, elements of Q(zeta) for zeta a primitive p^n-th root of
  unity, stored in the power basis modulo the p^n-th cyclotomic polynomial,
* ``ResidueInt``, integers modulo a prime power p^M,
* ``ComplexApprox``, double-precision complex numbers carrying an explicit
  absolute error bound propagated by first-order interval rules.

``rational_reconstruct`` bridges floating data back into exact rationals via
continued-fraction convergents with deterministic tie-breaking.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import BadExponent, NoConvergent, NotReal, PrecisionExhausted, ZeroInversion

Rational = Fraction

_ZERO = Fraction(0)
_ONE = Fraction(1)

# Relative slack multiplier covering rounding of each float operation.
_EPS = 2.0 ** -48
_TINY = 1e-300


def is_prime(m: int) -> bool:
    if m < 2:
        return False
    if m % 2 == 0:
        return m == 2
    f = 3
    while f * f <= m:
        if m % f == 0:
            return False
        f += 2
    return True


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected int or Fraction, got {type(x).__name__}")


# ---------------------------------------------------------------------------
# rational polynomial helpers (ascending coefficient lists)

def _poly_trim(c: list[Fraction]) -> list[Fraction]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_divmod(a: Sequence[Fraction], b: Sequence[Fraction]):
    a = list(a)
    q = [_ZERO] * max(0, len(a) - len(b) + 1)
    inv_lead = 1 / b[-1]
    while len(a) >= len(b) and _poly_trim(a):
        if len(a) < len(b):
            break
        shift = len(a) - len(b)
        factor = a[-1] * inv_lead
        q[shift] = factor
        for i, bc in enumerate(b):
            a[shift + i] -= factor * bc
        a.pop()
        _poly_trim(a)
    return _poly_trim(q), _poly_trim(a)


def _poly_xgcd(a: Sequence[Fraction], b: Sequence[Fraction]):
    """Return (g, u, v) with u*a + v*b = g over Q[x], g monic or zero."""
    r0, r1 = _poly_trim(list(a)), _poly_trim(list(b))
    u0, u1 = [_ONE], []
    v0, v1 = [], [_ONE]
    while r1:
        q, r = _poly_divmod(r0, r1)
        r0, r1 = r1, r
        u0, u1 = u1, _poly_sub(u0, _poly_mul(q, u1))
        v0, v1 = v1, _poly_sub(v0, _poly_mul(q, v1))
    if r0:
        lead = r0[-1]
        r0 = [c / lead for c in r0]
        u0 = [c / lead for c in u0]
        v0 = [c / lead for c in v0]
    return r0, u0, v0


def _poly_mul(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    if not a or not b:
        return []
    out = [_ZERO] * (len(a) + len(b) - 1)
    for i, ac in enumerate(a):
        if ac == 0:
            continue
        for j, bc in enumerate(b):
            out[i + j] += ac * bc
    return _poly_trim(out)


def _poly_sub(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else _ZERO) - (b[i] if i < len(b) else _ZERO) for i in range(n)]
    return _poly_trim(out)


# ---------------------------------------------------------------------------


class CycloNum:
    """Element of Q(zeta_{p^n}) in the power basis 1, zeta, ..., zeta^{phi-1}.

    Arithmetic is closed under reduction by the p^n-th cyclotomic polynomial
    Phi(x) = sum_{i<p} x^{i*p^(n-1)}; exponents are first reduced mod p^n
    using zeta^(p^n) = 1.
    """

    __slots__ = ("p", "n", "coeffs")

    def __init__(self, p: int, n: int, coeffs: Iterable):
        self.p = p
        self.n = n
        coeffs = tuple(_as_fraction(c) for c in coeffs)
        if len(coeffs) != self.degree(p, n):
            raise ValueError(f"expected {self.degree(p, n)} coefficients, got {len(coeffs)}")
        self.coeffs = coeffs

    @staticmethod
    def degree(p: int, n: int) -> int:
        return p ** (n - 1) * (p - 1)

    @classmethod
    def zero(cls, p: int, n: int) -> "CycloNum":
        return cls(p, n, [_ZERO] * cls.degree(p, n))

    @classmethod
    def one(cls, p: int, n: int) -> "CycloNum":
        return cls.rational(p, n, _ONE)

    @classmethod
    def rational(cls, p: int, n: int, value) -> "CycloNum":
        c = [_ZERO] * cls.degree(p, n)
        c[0] = _as_fraction(value)
        return cls(p, n, c)

    @classmethod
    def zeta_pow(cls, p: int, n: int, k: int) -> "CycloNum":
        dense = [_ZERO] * (p ** n)
        dense[k % (p ** n)] = _ONE
        return cls(p, n, cls._reduce_dense(p, n, dense))

    @staticmethod
    def _reduce_dense(p: int, n: int, dense: list[Fraction]) -> list[Fraction]:
        # dense is indexed by exponents < p^n; fold exponents >= phi(p^n)
        # using x^(t + (p-1)m) = -sum_{i<p-1} x^(i*m + t) with m = p^(n-1).
        m = p ** (n - 1)
        deg = m * (p - 1)
        out = list(dense[:deg]) + [_ZERO] * max(0, deg - len(dense))
        for j in range(deg, len(dense)):
            c = dense[j]
            if c == 0:
                continue
            t = j - deg
            for i in range(p - 1):
                out[i * m + t] -= c
        return out

    def _check_compat(self, other: "CycloNum"):
        if (self.p, self.n) != (other.p, other.n):
            raise ValueError("cyclotomic moduli differ")

    def _coerce(self, other) -> "CycloNum":
        if isinstance(other, CycloNum):
            self._check_compat(other)
            return other
        return CycloNum.rational(self.p, self.n, other)

    def __add__(self, other) -> "CycloNum":
        other = self._coerce(other)
        return CycloNum(self.p, self.n, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __sub__(self, other) -> "CycloNum":
        other = self._coerce(other)
        return CycloNum(self.p, self.n, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __rsub__(self, other) -> "CycloNum":
        return self._coerce(other) - self

    def __neg__(self) -> "CycloNum":
        return CycloNum(self.p, self.n, [-a for a in self.coeffs])

    def __mul__(self, other) -> "CycloNum":
        if isinstance(other, (int, Fraction)):
            return CycloNum(self.p, self.n, [a * other for a in self.coeffs])
        other = self._coerce(other)
        order = self.p ** self.n
        dense = [_ZERO] * order
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                if b == 0:
                    continue
                dense[(i + j) % order] += a * b
        return CycloNum(self.p, self.n, self._reduce_dense(self.p, self.n, dense))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "CycloNum":
        if isinstance(other, (int, Fraction)):
            other = _as_fraction(other)
            if other == 0:
                raise ZeroInversion("division by zero")
            return self * (1 / other)
        return self * cyclo_invert(self._coerce(other))

    def __pow__(self, k: int) -> "CycloNum":
        if k < 0:
            return cyclo_invert(self) ** (-k)
        result = CycloNum.one(self.p, self.n)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = CycloNum.rational(self.p, self.n, other)
        if not isinstance(other, CycloNum):
            return NotImplemented
        return (self.p, self.n) == (other.p, other.n) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.p, self.n, self.coeffs))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("value is not rational")
        return self.coeffs[0]

    def _cyclotomic_poly(self) -> list[Fraction]:
        m = self.p ** (self.n - 1)
        phi = [_ZERO] * (m * (self.p - 1) + 1)
        for i in range(self.p):
            phi[i * m] = _ONE
        return phi

    def embed(self, j_idx: int = 1) -> "ComplexApprox":
        """Complex value under zeta -> exp(2*pi*i*j_idx/p^n)."""
        order = self.p ** self.n
        total = ComplexApprox.exact(0.0)
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            total = total + ComplexApprox.unit_root(order, j_idx * i) * ComplexApprox.from_fraction(c)
        return total

    def __repr__(self):
        return f"CycloNum(p={self.p}, n={self.n}, coeffs={[str(c) for c in self.coeffs]})"


def cyclo_invert(a: CycloNum) -> CycloNum:
    """Inverse in Q(zeta_{p^n}) via extended gcd against the cyclotomic polynomial."""
    if a.is_zero():
        raise ZeroInversion("cannot invert zero")
    if a.is_rational():
        return CycloNum.rational(a.p, a.n, 1 / a.coeffs[0])
    g, u, _ = _poly_xgcd(list(a.coeffs), a._cyclotomic_poly())
    if len(g) != 1:
        # cannot happen for an irreducible modulus, guards construction bugs
        raise ZeroInversion("element shares a factor with the cyclotomic polynomial")
    scale = 1 / g[0]
    dense = [c * scale for c in u]
    dense += [_ZERO] * (a.p ** a.n - len(dense))
    return CycloNum(a.p, a.n, CycloNum._reduce_dense(a.p, a.n, dense))


def galois_map(a: CycloNum, k: int) -> CycloNum:
    """Image of a under the field automorphism zeta -> zeta^k, gcd(k, p) = 1."""
    if math.gcd(k, a.p) != 1:
        raise BadExponent(f"exponent {k} shares a factor with p={a.p}")
    order = a.p ** a.n
    dense = [_ZERO] * order
    for i, c in enumerate(a.coeffs):
        if c != 0:
            dense[(i * k) % order] += c
    return CycloNum(a.p, a.n, CycloNum._reduce_dense(a.p, a.n, dense))


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ResidueInt:
    """Canonical representative of an integer modulo a prime power."""

    modulus: int
    value: int

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % self.modulus)

    def _coerce(self, other) -> "ResidueInt":
        if isinstance(other, ResidueInt):
            if other.modulus != self.modulus:
                raise ValueError("residue moduli differ")
            return other
        if isinstance(other, int):
            return ResidueInt(self.modulus, other)
        raise TypeError(f"cannot mix ResidueInt with {type(other).__name__}")

    def __add__(self, other):
        other = self._coerce(other)
        return ResidueInt(self.modulus, self.value + other.value)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        return ResidueInt(self.modulus, self.value - other.value)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return ResidueInt(self.modulus, -self.value)

    def __mul__(self, other):
        other = self._coerce(other)
        return ResidueInt(self.modulus, self.value * other.value)

    __rmul__ = __mul__

    def inverse(self) -> "ResidueInt":
        if math.gcd(self.value, self.modulus) != 1:
            raise ZeroInversion(f"{self.value} is not a unit mod {self.modulus}")
        return ResidueInt(self.modulus, pow(self.value, -1, self.modulus))

    def is_zero(self) -> bool:
        return self.value == 0


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ComplexApprox:
    """Complex double with a declared absolute error bound.

    All operations propagate ``err`` conservatively (first-order interval
    rules plus rounding slack).  Decisions that would depend on values inside
    the error interval raise :class:`PrecisionExhausted` instead of guessing.
    """

    re: float
    im: float
    err: float

    def __post_init__(self):
        if self.err < 0 or math.isnan(self.err):
            raise ValueError("error bound must be non-negative")

    @classmethod
    def exact(cls, value: Union[int, float, complex]) -> "ComplexApprox":
        z = complex(value)
        return cls(z.real, z.imag, 0.0)

    @classmethod
    def of(cls, re: float, im: float = 0.0, err: float = 0.0) -> "ComplexApprox":
        return cls(float(re), float(im), float(err))

    @classmethod
    def from_fraction(cls, q: Fraction) -> "ComplexApprox":
        x = float(q)
        # one rounding step from the exact rational
        return cls(x, 0.0, abs(x) * _EPS + _TINY)

    @classmethod
    def unit_root(cls, order: int, k: int) -> "ComplexApprox":
        z = cmath.exp(2j * cmath.pi * (k % order) / order)
        return cls(z.real, z.imag, 4 * _EPS)

    def magnitude(self) -> float:
        return math.hypot(self.re, self.im)

    def _coerce(self, other) -> "ComplexApprox":
        if isinstance(other, ComplexApprox):
            return other
        if isinstance(other, Fraction):
            return ComplexApprox.from_fraction(other)
        if isinstance(other, (int, float, complex)):
            return ComplexApprox.exact(other)
        raise TypeError(f"cannot mix ComplexApprox with {type(other).__name__}")

    @staticmethod
    def _slack(re: float, im: float) -> float:
        return (abs(re) + abs(im)) * _EPS + _TINY

    def __add__(self, other):
        other = self._coerce(other)
        re, im = self.re + other.re, self.im + other.im
        return ComplexApprox(re, im, self.err + other.err + self._slack(re, im))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        re, im = self.re - other.re, self.im - other.im
        return ComplexApprox(re, im, self.err + other.err + self._slack(re, im))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return ComplexApprox(-self.re, -self.im, self.err)

    def conj(self) -> "ComplexApprox":
        return ComplexApprox(self.re, -self.im, self.err)

    def __mul__(self, other):
        other = self._coerce(other)
        z = complex(self.re, self.im) * complex(other.re, other.im)
        err = (
            self.magnitude() * other.err
            + other.magnitude() * self.err
            + self.err * other.err
        )
        return ComplexApprox(z.real, z.imag, err * (1 + 8 * _EPS) + 4 * self._slack(z.real, z.imag))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        m = other.magnitude()
        if m <= other.err:
            raise PrecisionExhausted("divisor interval contains zero")
        z = complex(self.re, self.im) / complex(other.re, other.im)
        err = (self.err * m + self.magnitude() * other.err) / (m * (m - other.err))
        return ComplexApprox(z.real, z.imag, err * (1 + 8 * _EPS) + 4 * self._slack(z.real, z.imag))

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def scale(self, c: Fraction) -> "ComplexApprox":
        return self * ComplexApprox.from_fraction(_as_fraction(c))

    def provably_nonzero(self) -> bool:
        return self.magnitude() > self.err

    def contains(self, value: complex) -> bool:
        return abs(complex(self.re, self.im) - complex(value)) <= self.err

    def __repr__(self):
        return f"ComplexApprox({self.re!r}, {self.im!r}, err={self.err:.3e})"


# ---------------------------------------------------------------------------


def _convergents(x: Fraction):
    """Continued-fraction convergents of x, ending with x itself."""
    h_prev, h = 1, math.floor(x)
    k_prev, k = 0, 1
    yield Fraction(h, k)
    frac = x - h
    while frac != 0:
        x = 1 / frac
        a = math.floor(x)
        h_prev, h = h, a * h + h_prev
        k_prev, k = k, a * k + k_prev
        yield Fraction(h, k)
        frac = x - a


def rational_reconstruct(x, tol: float, max_den: int) -> Fraction:
    """First continued-fraction convergent of re(x) within tol, denominator <= max_den.

    ``x`` may be a ComplexApprox, float or Fraction.  Raises NotReal when the
    imaginary part exceeds tol and NoConvergent when no admissible convergent
    exists.
    """
    if isinstance(x, ComplexApprox):
        if abs(x.im) > tol:
            raise NotReal(f"imaginary part {x.im} exceeds tolerance {tol}")
        re = Fraction(x.re)
    elif isinstance(x, float):
        re = Fraction(x)
    elif isinstance(x, (int, Fraction)):
        re = Fraction(x)
    else:
        raise TypeError(f"cannot reconstruct from {type(x).__name__}")
    tol_f = Fraction(tol)
    for conv in _convergents(re):
        if conv.denominator > max_den:
            break
        if abs(re - conv) <= tol_f:
            return conv
    raise NoConvergent(f"no convergent with denominator <= {max_den} within {tol}")


def reconstruct_margin(x, tol: float, max_den: int) -> tuple[Fraction, float]:
    """Reconstruction together with the margin tol - |re(x) - q|."""
    q = rational_reconstruct(x, tol, max_den)
    re = Fraction(x.re) if isinstance(x, ComplexApprox) else Fraction(x)
    return q, float(Fraction(tol) - abs(re - q))
