"""Small finite fields, elliptic curves, Weil pairings and descent maps.

Fields F_q with q = ell^d are kept small enough (q <= 10^4) for exhaustive
point enumeration and brute-force discrete logarithms; all choices are
deterministic (lexicographic tie-breaking on coefficient vectors) so that
fixtures are reproducible.

The Weil pairing is computed by Miller's algorithm evaluated at shifted
degree-zero divisors,

    e_p(S, T) = [f_S(T+R) / f_S(R)] / [f_T(S-R) / f_T(-R)],

where f_P has divisor p(P) - p(infinity).  Every pairing and descent value
is computed for two independent auxiliary shifts R and the results must
agree exactly; disagreement or persistent degeneracy raises
DegenerateEvaluation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

from .errors import DegenerateEvaluation, NotFullTorsion, ZeroInversion


class Fq:
    """The field F_q, q = ell^d, with a fixed monic irreducible modulus."""

    _cache: dict = {}

    def __new__(cls, ell: int, d: int = 1, modulus: Optional[tuple[int, ...]] = None):
        key = (ell, d, modulus)
        if key in cls._cache:
            return cls._cache[key]
        self = super().__new__(cls)
        cls._cache[key] = self
        return self

    def __init__(self, ell: int, d: int = 1, modulus: Optional[tuple[int, ...]] = None):
        if getattr(self, "_initialized", False):
            return
        from .exactnum import is_prime

        if not is_prime(ell):
            raise ValueError(f"residue characteristic {ell} is not prime")
        if d < 1:
            raise ValueError("extension degree must be >= 1")
        self.ell = ell
        self.d = d
        self.q = ell ** d
        if d == 1:
            self.modulus = (0, 1) if modulus is None else tuple(modulus)
        else:
            self.modulus = tuple(modulus) if modulus is not None else self._find_irreducible(ell, d)
            if len(self.modulus) != d + 1 or self.modulus[-1] % ell != 1:
                raise ValueError("modulus must be monic of degree d")
            if not self._is_irreducible([c % ell for c in self.modulus], ell):
                raise ValueError("modulus is not irreducible")
        self._gen = None
        self._dlog = None
        self._initialized = True

    @staticmethod
    def _poly_mod_mul(a, b, mod, ell):
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] = (out[i + j] + x * y) % ell
        d = len(mod) - 1
        for k in range(len(out) - 1, d - 1, -1):
            c = out[k]
            if c:
                for i in range(d + 1):
                    out[k - d + i] = (out[k - d + i] - c * mod[i]) % ell
        return [c % ell for c in out[:d]] + [0] * max(0, d - len(out))

    @classmethod
    def _is_irreducible(cls, mod, ell):
        # f of degree d is irreducible iff x^(ell^d) = x mod f and
        # gcd-style check x^(ell^(d/e)) != x for prime divisors e of d
        d = len(mod) - 1
        if d == 1:
            return True

        def xq_power(k):
            # x^(ell^k) mod f by repeated ell-th powering
            cur = [0, 1][: d] + [0] * max(0, d - 2)
            for _ in range(k):
                acc = [1] + [0] * (d - 1)
                base = cur
                e = ell
                while e:
                    if e & 1:
                        acc = cls._poly_mod_mul(acc, base, mod, ell)
                    base = cls._poly_mod_mul(base, base, mod, ell)
                    e >>= 1
                cur = acc
            return cur

        x_poly = [0, 1][: d] + [0] * max(0, d - 2)
        if xq_power(d) != x_poly:
            return False
        e = 2
        dd = d
        primes = set()
        while e * e <= dd:
            if dd % e == 0:
                primes.add(e)
                while dd % e == 0:
                    dd //= e
            e += 1
        if dd > 1:
            primes.add(dd)
        for e in primes:
            if xq_power(d // e) == x_poly:
                return False
        return True

    @classmethod
    def _find_irreducible(cls, ell, d):
        # smallest monic irreducible in lexicographic coefficient order
        for lower in itertools.product(range(ell), repeat=d):
            mod = tuple(lower) + (1,)
            if cls._is_irreducible(list(mod), ell):
                return mod
        raise RuntimeError("no irreducible polynomial found")

    # -- element constructors -------------------------------------------------

    def elem(self, coeffs) -> "FqElem":
        if isinstance(coeffs, int):
            c = [coeffs % self.ell] + [0] * (self.d - 1)
        else:
            c = [x % self.ell for x in coeffs]
            c += [0] * (self.d - len(c))
        return FqElem(self, tuple(c))

    def zero(self) -> "FqElem":
        return self.elem(0)

    def one(self) -> "FqElem":
        return self.elem(1)

    def elements(self):
        """All field elements, ascending in the canonical order."""
        for coeffs in itertools.product(range(self.ell), repeat=self.d):
            yield FqElem(self, coeffs)

    def multiplicative_generator(self) -> "FqElem":
        if self._gen is None:
            for x in self.elements():
                if x.is_zero():
                    continue
                if self._order_of(x) == self.q - 1:
                    self._gen = x
                    break
        return self._gen

    def _order_of(self, x: "FqElem") -> int:
        acc = x
        k = 1
        one = self.one()
        while acc != one:
            acc = acc * x
            k += 1
            if k > self.q:
                raise RuntimeError("order computation overflow")
        return k

    def dlog(self, x: "FqElem") -> int:
        """Discrete log against the canonical generator (brute-force table)."""
        if x.is_zero():
            raise ZeroInversion("dlog of zero")
        if self._dlog is None:
            table = {}
            g = self.multiplicative_generator()
            acc = self.one()
            for k in range(self.q - 1):
                table[acc.coeffs] = k
                acc = acc * g
            self._dlog = table
        return self._dlog[x.coeffs]

    def __eq__(self, other):
        return isinstance(other, Fq) and (self.ell, self.d, self.modulus) == (
            other.ell,
            other.d,
            other.modulus,
        )

    def __hash__(self):
        return hash((self.ell, self.d, self.modulus))

    def __repr__(self):
        return f"Fq({self.ell}^{self.d})" if self.d > 1 else f"Fq({self.ell})"


@dataclass(frozen=True)
class FqElem:
    field: Fq
    coeffs: tuple[int, ...]

    def _check(self, other):
        if self.field != other.field:
            raise ValueError("field mismatch")

    def __add__(self, other):
        self._check(other)
        ell = self.field.ell
        return FqElem(self.field, tuple((a + b) % ell for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        self._check(other)
        ell = self.field.ell
        return FqElem(self.field, tuple((a - b) % ell for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        ell = self.field.ell
        return FqElem(self.field, tuple((-a) % ell for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, int):
            ell = self.field.ell
            return FqElem(self.field, tuple((a * other) % ell for a in self.coeffs))
        self._check(other)
        f = self.field
        prod = f._poly_mod_mul(list(self.coeffs), list(other.coeffs), list(f.modulus), f.ell)
        return FqElem(f, tuple(prod))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        acc = self.field.one()
        base = self
        while e:
            if e & 1:
                acc = acc * base
            base = base * base
            e >>= 1
        return acc

    def inverse(self):
        if self.is_zero():
            raise ZeroInversion("inverse of zero in F_q")
        return self ** (self.field.q - 2)

    def __truediv__(self, other):
        return self * other.inverse()

    def is_zero(self):
        return all(c == 0 for c in self.coeffs)

    def frobenius(self) -> "FqElem":
        """Arithmetic Frobenius x -> x^ell."""
        return self ** self.field.ell

    def __lt__(self, other):
        self._check(other)
        return self.coeffs < other.coeffs

    def __repr__(self):
        if self.field.d == 1:
            return f"{self.coeffs[0]}"
        return f"FqElem{self.coeffs}"


# ---------------------------------------------------------------------------
# polynomials over F_q: ascending coefficient lists


def poly_eval(coeffs: Sequence[FqElem], x: FqElem) -> FqElem:
    acc = x.field.zero()
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def poly_divide_out_root(coeffs: list[FqElem], r: FqElem) -> list[FqElem]:
    """Synthetic division by (x - r); requires r to be a root."""
    out = [None] * (len(coeffs) - 1)
    carry = coeffs[-1]
    for i in range(len(coeffs) - 2, -1, -1):
        out[i] = carry
        carry = coeffs[i] + carry * r
    if not carry.is_zero():
        raise ValueError("not a root")
    return out


def ff_roots(coeffs: Sequence[FqElem], field: Fq) -> list[FqElem]:
    """All roots of the polynomial in F_q, with multiplicity, in ascending
    canonical order."""
    work = list(coeffs)
    while work and work[-1].is_zero():
        work.pop()
    if len(work) < 2:
        return []
    out = []
    for x in field.elements():
        if poly_eval(work, x).is_zero():
            mult = 0
            while len(work) > 1 and poly_eval(work, x).is_zero():
                work = poly_divide_out_root(work, x)
                mult += 1
            out.extend([x] * mult)
    return out


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CurveFq:
    """Short Weierstrass curve y^2 = x^3 + a x + b over F_q, char >= 5."""

    field: Fq
    a: FqElem
    b: FqElem

    def __post_init__(self):
        if self.field.ell in (2, 3):
            raise ValueError("short Weierstrass form requires characteristic >= 5")
        disc = self.a * self.a * self.a * 4 + self.b * self.b * 27
        if disc.is_zero():
            raise ValueError("singular curve")

    def infinity(self) -> "ECPointFq":
        return ECPointFq(self, None, None)

    def point(self, x, y) -> "ECPointFq":
        xe = x if isinstance(x, FqElem) else self.field.elem(x)
        ye = y if isinstance(y, FqElem) else self.field.elem(y)
        p = ECPointFq(self, xe, ye)
        if not self.contains(xe, ye):
            raise ValueError(f"({xe}, {ye}) not on curve")
        return p

    def contains(self, x: FqElem, y: FqElem) -> bool:
        return (y * y - (x * x * x + self.a * x + self.b)).is_zero()

    def points(self) -> list["ECPointFq"]:
        """All rational points; cached, infinity first then canonical order."""
        return _curve_points(self)

    def order(self) -> int:
        return len(self.points())


@lru_cache(maxsize=None)
def _curve_points(curve: CurveFq) -> list["ECPointFq"]:
    sqrt_table: dict = {}
    for y in curve.field.elements():
        sqrt_table.setdefault((y * y).coeffs, []).append(y)
    pts = [curve.infinity()]
    for x in curve.field.elements():
        rhs = x * x * x + curve.a * x + curve.b
        for y in sqrt_table.get(rhs.coeffs, []):
            pts.append(ECPointFq(curve, x, y))
    return pts


@dataclass(frozen=True)
class ECPointFq:
    curve: CurveFq
    x: Optional[FqElem]
    y: Optional[FqElem]

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def key(self):
        """Canonical encoding used for deterministic tie-breaking."""
        if self.is_infinity:
            return ()
        return (self.x.coeffs, self.y.coeffs)

    def __neg__(self):
        if self.is_infinity:
            return self
        return ECPointFq(self.curve, self.x, -self.y)

    def __add__(self, other: "ECPointFq") -> "ECPointFq":
        if self.curve != other.curve:
            raise ValueError("points on different curves")
        if self.is_infinity:
            return other
        if other.is_infinity:
            return self
        if self.x == other.x:
            if (self.y + other.y).is_zero():
                return self.curve.infinity()
            # tangent
            num = self.x * self.x * 3 + self.curve.a
            lam = num / (self.y * 2)
        else:
            lam = (other.y - self.y) / (other.x - self.x)
        x3 = lam * lam - self.x - other.x
        y3 = lam * (self.x - x3) - self.y
        return ECPointFq(self.curve, x3, y3)

    def __sub__(self, other):
        return self + (-other)


def ec_mul(point: ECPointFq, k: int) -> ECPointFq:
    """Scalar multiple [k] P by double-and-add."""
    if k < 0:
        return ec_mul(-point, -k)
    acc = point.curve.infinity()
    base = point
    while k:
        if k & 1:
            acc = acc + base
        base = base + base
        k >>= 1
    return acc


def point_order(point: ECPointFq, bound: Optional[int] = None) -> int:
    acc = point
    k = 1
    limit = bound if bound is not None else point.curve.field.q + 2 * point.curve.field.q
    while not acc.is_infinity:
        acc = acc + point
        k += 1
        if k > limit:
            raise RuntimeError("order computation overflow")
    return k


@dataclass(frozen=True)
class TorsionBasis:
    """Generators S, T of the rational p-torsion with zeta_res = e_p(T, S)."""

    S: ECPointFq
    T: ECPointFq
    p: int
    zeta_res: FqElem


def find_p_torsion_basis(curve: CurveFq, p: int) -> TorsionBasis:
    """Deterministic basis of E[p] inside E(F_q).

    S is the order-p point with smallest canonical encoding, T the smallest
    making e_p(S, T) non-trivial.  Requires p | q - 1 and full p-torsion.
    """
    q = curve.field.q
    if (q - 1) % p != 0:
        raise NotFullTorsion(f"mu_p not rational: p={p} does not divide q-1={q - 1}")
    torsion = [pt for pt in curve.points() if not pt.is_infinity and ec_mul(pt, p).is_infinity]
    if len(torsion) != p * p - 1:
        raise NotFullTorsion(
            f"found {len(torsion)} points of order dividing {p}, expected {p * p - 1}"
        )
    torsion.sort(key=lambda pt: pt.key())
    s_point = torsion[0]
    one = curve.field.one()
    for cand in torsion:
        val = weil_pairing(s_point, cand, p)
        if val != one:
            return TorsionBasis(s_point, cand, p, weil_pairing(cand, s_point, p))
    raise NotFullTorsion("no non-degenerate partner found")


class _Degenerate(Exception):
    """Internal: retry with a different auxiliary shift."""


def _line_value(a: ECPointFq, b: ECPointFq, x: ECPointFq) -> FqElem:
    """Value at x of the line through a and b (tangent when a == b)."""
    field = x.curve.field
    if a.is_infinity and b.is_infinity:
        return field.one()
    if a.is_infinity:
        return x.x - b.x
    if b.is_infinity:
        return x.x - a.x
    if a.x == b.x:
        if (a.y + b.y).is_zero():
            return x.x - a.x
        num = a.x * a.x * 3 + a.curve.a
        lam = num / (a.y * 2)
    else:
        lam = (b.y - a.y) / (b.x - a.x)
    return (x.y - a.y) - lam * (x.x - a.x)


def _vertical_value(a: ECPointFq, x: ECPointFq) -> FqElem:
    if a.is_infinity:
        return x.curve.field.one()
    return x.x - a.x


def _miller_values(point: ECPointFq, m: int, evals: Sequence[ECPointFq]) -> list[FqElem]:
    """f_{m,P} evaluated at each of the given affine points."""
    field = point.curve.field
    for e in evals:
        if e.is_infinity:
            raise _Degenerate("evaluation at infinity")
    vals = [field.one() for _ in evals]
    v = point
    for bit in bin(m)[3:]:
        new_vals = []
        doubled = v + v
        for val, e in zip(vals, evals):
            num = _line_value(v, v, e)
            den = _vertical_value(doubled, e)
            if num.is_zero() or den.is_zero():
                raise _Degenerate("hit a zero of an intermediate line")
            new_vals.append(val * val * num / den)
        vals = new_vals
        v = doubled
        if bit == "1":
            added = v + point
            new_vals = []
            for val, e in zip(vals, evals):
                num = _line_value(v, point, e)
                den = _vertical_value(added, e)
                if num.is_zero() or den.is_zero():
                    raise _Degenerate("hit a zero of an intermediate line")
                new_vals.append(val * num / den)
            vals = new_vals
            v = added
    return vals


def _miller_ratio(point: ECPointFq, m: int, plus: ECPointFq, minus: ECPointFq) -> FqElem:
    """f_{m,P}((plus) - (minus)) = f(plus) / f(minus)."""
    a, b = _miller_values(point, m, [plus, minus])
    return a / b


RETRY_BUDGET = 32


def _shift_candidates(curve: CurveFq, excluded: set) -> list[ECPointFq]:
    out = []
    for pt in sorted((p for p in curve.points() if not p.is_infinity), key=lambda p: p.key()):
        if pt.key() not in excluded:
            out.append(pt)
        if len(out) >= RETRY_BUDGET:
            break
    return out


def _weil_direct(s_point: ECPointFq, t_point: ECPointFq, p: int, want: int) -> list[FqElem]:
    """Values of the shifted ratio formula for up to ``want`` admissible shifts."""
    excluded = {
        s_point.curve.infinity().key(),
        s_point.key(),
        (-t_point).key(),
        (s_point - t_point).key(),
    }
    results: list[FqElem] = []
    for r_point in _shift_candidates(s_point.curve, excluded):
        try:
            num = _miller_ratio(s_point, p, t_point + r_point, r_point)
            den = _miller_ratio(t_point, p, s_point - r_point, -r_point)
        except _Degenerate:
            continue
        results.append(num / den)
        if len(results) == want:
            break
    return results


def weil_pairing(s_point: ECPointFq, t_point: ECPointFq, p: int) -> FqElem:
    """Weil pairing e_p(S, T) on E[p].

    Two independent evaluations must agree exactly: two distinct auxiliary
    shifts when the curve admits them, otherwise one direct shift checked
    against the reciprocal computation e_p(T, S)^(-1) (on the smallest
    curves the direct formula admits a single admissible shift).
    """
    field = s_point.curve.field
    if s_point.is_infinity or t_point.is_infinity:
        return field.one()
    results = _weil_direct(s_point, t_point, p, want=2)
    if len(results) == 2:
        if results[0] != results[1]:
            raise DegenerateEvaluation("shift-dependent Weil pairing value")
        return results[0]
    reciprocal = _weil_direct(t_point, s_point, p, want=2 - len(results))
    if results and reciprocal:
        if results[0] * reciprocal[0] != field.one():
            raise DegenerateEvaluation("Weil pairing reciprocity check failed")
        return results[0]
    if len(reciprocal) == 2:
        if reciprocal[0] != reciprocal[1]:
            raise DegenerateEvaluation("shift-dependent Weil pairing value")
        return reciprocal[0].inverse()
    raise DegenerateEvaluation("all auxiliary shifts failed for the Weil pairing")


def descent_eval(
    curve: CurveFq,
    s_point: ECPointFq,
    q_point: ECPointFq,
    p: int,
    zeta_res: Optional[FqElem] = None,
) -> int:
    """Kummer-descent evaluation at Q of the function with divisor
    p(S) - p(infinity), as an exponent class modulo p-th powers.

    Returns k with f_S(Q)^((q-1)/p) = zeta_res^k; the evaluation uses the
    shift rule f_S((Q+R) - (R)) which is independent of R up to exact p-th
    powers, verified at two shifts.
    """
    if q_point.is_infinity:
        raise ValueError("descent evaluation requires an affine point")
    field = curve.field
    if zeta_res is None:
        zeta_res = find_p_torsion_basis(curve, p).zeta_res
    cofactor = (field.q - 1) // p
    excluded = {
        curve.infinity().key(),
        s_point.key(),
        (-q_point).key(),
        (s_point - q_point).key(),
    }
    classes = []
    for r_point in _shift_candidates(curve, excluded):
        try:
            val = _miller_ratio(s_point, p, q_point + r_point, r_point)
        except _Degenerate:
            continue
        w = val ** cofactor
        k = _dlog_root_of_unity(w, zeta_res, p)
        classes.append(k)
        if len(classes) == 2:
            break
    if len(classes) < 2:
        raise DegenerateEvaluation("all auxiliary shifts failed for descent evaluation")
    if classes[0] != classes[1]:
        raise DegenerateEvaluation("shift-dependent descent class")
    return classes[0]


def _dlog_root_of_unity(w: FqElem, zeta: FqElem, p: int) -> int:
    acc = w.field.one()
    for k in range(p):
        if acc == w:
            return k
        acc = acc * zeta
    raise DegenerateEvaluation("value is not a power of the reference root of unity")
