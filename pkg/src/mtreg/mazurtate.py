"""Global height-pairing evaluation from supplied descent data (degree-p case).

The pairing of two rational points P, Q is accumulated from local duality
pairings at a finite set of tame places: a trace preimage x of the descent
image of P is acted on by every group element, restricted to each chosen
place, and paired there against the local Kummer class of the reduction of
Q.  The coefficient pattern sum_g c_g g is read in the augmentation-ideal
quotient, giving the class of (sum_g c_g dlog(g)) (sigma - 1).

Global descent classes are carried as polynomials modulo the torsion
polynomial f = prod (x - w_S) over the base field F: restriction to a place
reduces the coefficients through the declared reduction map and evaluates
at the recorded root images, and the group action is coefficient-wise.

All heavy arithmetic inputs (Selmer generators, descent images of points,
reduction maps, negative controls) come from fixtures; this module never
computes class groups or units.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from . import plinalg
from .errors import (
    BadReduction,
    InconsistentPlaces,
    NoPreimage,
    ShapeError,
    UnsupportedPlace,
)
from .ffec import ECPointFq, FqElem, ff_roots, poly_eval
from .groupring import AugClass, GroupData
from .localpair import LocalKummerElem, LocalPlace, LocalUnitClass, kummer_image, local_tate


@dataclass(frozen=True)
class NumberFieldData:
    """Degree-p field F/Q in a power basis, with the generator action.

    ``min_poly`` lists the monic defining polynomial's coefficients
    (ascending, length degree + 1); ``sigma_matrix`` gives the action of
    sigma on the power basis, column k holding the image of y^k.
    """

    min_poly: tuple
    sigma_matrix: tuple

    def __post_init__(self):
        object.__setattr__(
            self, "min_poly", tuple(Fraction(c) for c in self.min_poly)
        )
        object.__setattr__(
            self,
            "sigma_matrix",
            tuple(tuple(Fraction(c) for c in row) for row in self.sigma_matrix),
        )
        if self.min_poly[-1] != 1:
            raise ShapeError("defining polynomial must be monic")

    @property
    def degree(self) -> int:
        return len(self.min_poly) - 1

    def zero(self):
        return tuple(Fraction(0) for _ in range(self.degree))

    def one(self):
        return tuple(Fraction(1 if i == 0 else 0) for i in range(self.degree))

    def from_rational(self, c) -> tuple:
        out = [Fraction(0)] * self.degree
        out[0] = Fraction(c)
        return tuple(out)

    def add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple(x - y for x, y in zip(a, b))

    def mul(self, a, b):
        deg = self.degree
        dense = [Fraction(0)] * (2 * deg - 1)
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                dense[i + j] += x * y
        # reduce modulo the monic defining polynomial
        for k in range(len(dense) - 1, deg - 1, -1):
            c = dense[k]
            if c == 0:
                continue
            for i in range(deg + 1):
                dense[k - deg + i] -= c * self.min_poly[i]
        return tuple(dense[:deg])

    def scale(self, a, c):
        c = Fraction(c)
        return tuple(x * c for x in a)

    def apply_sigma(self, a, power: int = 1):
        out = tuple(a)
        for _ in range(power % self.order_of_sigma()):
            out = tuple(
                sum(self.sigma_matrix[i][k] * out[k] for k in range(self.degree))
                for i in range(self.degree)
            )
        return out

    def order_of_sigma(self) -> int:
        return self.degree

    def validate(self) -> "NumberFieldData":
        deg = self.degree
        y = tuple(Fraction(1 if i == 1 else 0) for i in range(deg))
        # column consistency: sigma(y^k) = sigma(y)^k
        sig_y = self.apply_sigma(y)
        power = self.one()
        for k in range(deg):
            col = tuple(self.sigma_matrix[i][k] for i in range(deg))
            if col != power:
                raise ShapeError(f"sigma matrix column {k} is not sigma(y)^{k}")
            power = self.mul(power, sig_y)
        # sigma has order exactly the degree (prime), so it is non-trivial
        if sig_y == y:
            raise ShapeError("sigma acts trivially")
        acc = y
        for _ in range(deg):
            acc = self.apply_sigma(acc)
        if acc != y:
            raise ShapeError("sigma does not have the declared order")
        # sigma(y) must again be a root of the defining polynomial
        val = self.zero()
        power = self.one()
        for c in self.min_poly[:-1]:
            val = self.add(val, self.scale(power, c))
            power = self.mul(power, sig_y)
        val = self.add(val, power)
        if any(x != 0 for x in val):
            raise ShapeError("sigma(y) is not a root of the defining polynomial")
        return self


@dataclass(frozen=True)
class SelmerElem:
    """Descent class represented by a polynomial of degree < deg f with
    coefficients in F (power-basis vectors)."""

    field_data: NumberFieldData
    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(
            self,
            "coeffs",
            tuple(tuple(Fraction(c) for c in vec) for vec in self.coeffs),
        )

    @classmethod
    def constant(cls, field_data: NumberFieldData, value, length: int) -> "SelmerElem":
        coeffs = [field_data.from_rational(0) for _ in range(length)]
        coeffs[0] = field_data.from_rational(value)
        return cls(field_data, coeffs)

    def is_zero_class(self) -> bool:
        return all(all(c == 0 for c in vec) for vec in self.coeffs)


def selmer_mul(a: SelmerElem, b: SelmerElem, torsion_poly: Sequence) -> SelmerElem:
    """Product in F[x]/(f); f is monic with F-coefficient vectors."""
    fd = a.field_data
    deg = len(torsion_poly) - 1
    dense = [fd.zero() for _ in range(2 * deg - 1)]
    for i, x in enumerate(a.coeffs):
        for j, y in enumerate(b.coeffs):
            dense[i + j] = fd.add(dense[i + j], fd.mul(x, y))
    for k in range(len(dense) - 1, deg - 1, -1):
        c = dense[k]
        if all(v == 0 for v in c):
            continue
        for i in range(deg + 1):
            dense[k - deg + i] = fd.sub(dense[k - deg + i], fd.mul(c, torsion_poly[i]))
    return SelmerElem(fd, dense[:deg])


def selmer_pow(a: SelmerElem, e: int, torsion_poly: Sequence) -> SelmerElem:
    fd = a.field_data
    deg = len(torsion_poly) - 1
    acc = SelmerElem.constant(fd, 1, deg)
    base = a
    while e:
        if e & 1:
            acc = selmer_mul(acc, base, torsion_poly)
        base = selmer_mul(base, base, torsion_poly)
        e >>= 1
    return acc


def g_act(sigma_power: int, h: SelmerElem) -> SelmerElem:
    """Coefficient-wise Galois action; order-p and trivial on rationals."""
    fd = h.field_data
    return SelmerElem(fd, tuple(fd.apply_sigma(vec, sigma_power) for vec in h.coeffs))


def trace_preimage(x_tilde: Sequence[int], sigma_matrix: Sequence[Sequence[int]], p: int):
    """First solution x of Tr_G x = x_tilde over F_p, free variables zero.

    ``sigma_matrix`` is the F_p-representation of the generator on the
    Selmer coordinates; Tr_G = sum of its first p powers.
    """
    dim = len(x_tilde)
    if dim == 0:
        return []
    acc = [[0] * dim for _ in range(dim)]
    power = [[1 if i == j else 0 for j in range(dim)] for i in range(dim)]
    for _ in range(p):
        for i in range(dim):
            for j in range(dim):
                acc[i][j] = (acc[i][j] + power[i][j]) % p
        power = [
            [sum(sigma_matrix[i][k] * power[k][j] for k in range(dim)) % p for j in range(dim)]
            for i in range(dim)
        ]
    sol = plinalg.solve_mod_p(acc, [v % p for v in x_tilde], p)
    if sol is None:
        raise NoPreimage("descent image is not a trace; fixture data is inconsistent")
    return sol


RESTRICTION_PRECISION = 16


def _hensel_lift_root(coeffs_mod: Sequence[int], root_mod_ell: int, ell: int, k: int) -> int:
    """Simple root of a polynomial lifted from Z/ell to Z/ell^k by Newton."""
    modulus = ell ** k

    def ev(poly, x, m):
        acc = 0
        for c in reversed(poly):
            acc = (acc * x + c) % m
        return acc

    deriv = [(i * c) % modulus for i, c in enumerate(coeffs_mod)][1:]
    x = root_mod_ell % ell
    d = ev(deriv, x, ell)
    if d % ell == 0:
        raise BadReduction("root is not simple; cannot lift")
    prec = 1
    while prec < k:
        prec = min(2 * prec, k)
        m = ell ** prec
        fx = ev(coeffs_mod, x, m)
        dx = ev(deriv, x, m)
        x = (x - fx * pow(dx, -1, m)) % m
    return x


@dataclass(frozen=True)
class PlaceRestrictionData:
    """Everything needed to restrict a global class at one chosen place:
    the local place, the mod-ell images of the field basis, the root images
    of the torsion polynomial for the basis labels, and the linear shift
    used to form w = y + lambda x.

    Restriction places must have residue degree one (the chosen place is
    split), so the completion is Q_ell and evaluations can be carried to
    higher ell-adic precision by Hensel lifting the recorded roots.
    """

    place: LocalPlace
    reduction_basis: tuple
    root_images: tuple
    lambda_shift: Fraction = Fraction(0)

    def __post_init__(self):
        if self.place.field.d != 1:
            raise UnsupportedPlace(
                f"place {self.place.label}: restriction requires a split place"
            )

    def root_image(self, label: str) -> FqElem:
        for key, val in self.root_images:
            if key == label:
                return val
        raise KeyError(label)

    @classmethod
    def create(cls, place, reduction_basis, root_images: Mapping, lambda_shift=0):
        return cls(
            place,
            tuple(reduction_basis),
            tuple(sorted(root_images.items())),
            Fraction(lambda_shift),
        )

    def reduce_field_elem(self, vec) -> FqElem:
        field = self.place.field
        total = field.zero()
        for c, img in zip(vec, self.reduction_basis):
            c = Fraction(c)
            if c.denominator % field.ell == 0:
                raise BadReduction(
                    f"denominator {c.denominator} not invertible at ell={field.ell}"
                )
            num = c.numerator % field.ell
            den_inv = pow(c.denominator % field.ell, -1, field.ell)
            total = total + img * ((num * den_inv) % field.ell)
        return total

    # -- ell-adic machinery ---------------------------------------------------

    def _modulus(self) -> int:
        return self.place.field.ell ** RESTRICTION_PRECISION

    def _reduce_rational_adic(self, c) -> int:
        m = self._modulus()
        c = Fraction(c)
        if c.denominator % self.place.field.ell == 0:
            raise BadReduction(
                f"denominator {c.denominator} not invertible at ell={self.place.field.ell}"
            )
        return (c.numerator * pow(c.denominator, -1, m)) % m

    def _lifted_rho(self, field_data: NumberFieldData) -> int:
        ell = self.place.field.ell
        g_mod = [self._reduce_rational_adic(c) for c in field_data.min_poly]
        rho_bar = self.reduction_basis[1].coeffs[0] if len(self.reduction_basis) > 1 else 0
        return _hensel_lift_root(g_mod, rho_bar, ell, RESTRICTION_PRECISION)

    def _reduce_field_elem_adic(self, vec, rho_lift: int) -> int:
        m = self._modulus()
        total = 0
        power = 1
        for c in vec:
            total = (total + self._reduce_rational_adic(c) * power) % m
            power = (power * rho_lift) % m
        return total

    def lifted_roots(self, field_data: NumberFieldData, torsion_poly) -> dict:
        """Hensel lifts of the recorded root images to Z/ell^K, keyed by label."""
        ell = self.place.field.ell
        rho_lift = self._lifted_rho(field_data)
        f_mod = [self._reduce_field_elem_adic(vec, rho_lift) for vec in torsion_poly]
        out = {"rho": rho_lift, "f": f_mod}
        for label, img in self.root_images:
            out[label] = _hensel_lift_root(f_mod, img.coeffs[0], ell, RESTRICTION_PRECISION)
        return out

    def validate(self, field_data: NumberFieldData, torsion_poly) -> "PlaceRestrictionData":
        field = self.place.field
        # reduction respects the power basis
        if self.reduction_basis[0] != field.one():
            raise ShapeError("reduction must send 1 to 1")
        rho = self.reduction_basis[1] if len(self.reduction_basis) > 1 else field.one()
        power = field.one()
        for img in self.reduction_basis:
            if img != power:
                raise ShapeError("reduction basis images are not powers of rho")
            power = power * rho
        # rho is a root of the reduced defining polynomial
        coeffs = [self.reduce_rational(c) for c in field_data.min_poly]
        if not poly_eval(coeffs, rho).is_zero():
            raise ShapeError("reduction image is not a root of the defining polynomial")
        # recorded root images are roots of the reduced torsion polynomial
        reduced_f = [self.reduce_field_elem(vec) for vec in torsion_poly]
        for label, img in self.root_images:
            if not poly_eval(reduced_f, img).is_zero():
                raise ShapeError(f"root image {label} does not satisfy the torsion polynomial")
        # root images agree with w = y + lambda x on the reduced basis points
        lam = self.reduce_rational(self.lambda_shift)
        for label, point in (("S", self.place.basis.S), ("T", self.place.basis.T)):
            expected = point.y + lam * point.x
            if self.root_image(label) != expected:
                raise ShapeError(f"root image {label} does not match the reduced basis point")
        # lifting must be possible (simple roots)
        self.lifted_roots(field_data, torsion_poly)
        return self

    def reduce_rational(self, c) -> FqElem:
        field = self.place.field
        c = Fraction(c)
        if c.denominator % field.ell == 0:
            raise BadReduction(f"denominator {c.denominator} not invertible at ell={field.ell}")
        num = c.numerator % field.ell
        den_inv = pow(c.denominator % field.ell, -1, field.ell)
        return field.one() * ((num * den_inv) % field.ell)


def restrict(
    h: SelmerElem,
    place_data: PlaceRestrictionData,
    torsion_poly: Optional[Sequence] = None,
) -> LocalKummerElem:
    """Local classes of h at the chosen place.

    The value (iota h)(w_X) is computed in Z/ell^K at the Hensel-lifted root
    for each basis label X; its class records the ell-adic valuation mod p
    together with the residue-unit exponent.  A value indistinguishable
    from zero at the working precision raises BadReduction, as does a
    denominator not invertible at ell.
    """
    field_data = h.field_data
    if torsion_poly is None:
        raise BadReduction("restriction requires the torsion polynomial")
    field = place_data.place.field
    ell = field.ell
    p = place_data.place.p
    lifts = place_data.lifted_roots(field_data, torsion_poly)
    rho_lift = lifts["rho"]
    modulus = ell ** RESTRICTION_PRECISION
    coeffs_adic = [place_data._reduce_field_elem_adic(vec, rho_lift) for vec in h.coeffs]
    classes = {}
    for label in ("S", "T"):
        root = lifts[label]
        value = 0
        for c in reversed(coeffs_adic):
            value = (value * root + c) % modulus
        if value == 0:
            raise BadReduction(
                f"evaluation at root image {label} vanishes at working precision"
            )
        v = 0
        while value % ell == 0:
            value //= ell
            v += 1
        unit_exp = field.dlog(field.elem(value % ell)) % p
        classes[label] = LocalUnitClass(p, v % p, unit_exp)
    return LocalKummerElem.of(classes)


@dataclass
class SelmerGroupData:
    """Fixture-supplied generators of the generalized descent group with the
    generator action and the descent images of the named points."""

    field_data: NumberFieldData
    torsion_poly: tuple
    generators: list
    sigma_matrix: list
    point_images: dict
    negative_controls: list = field(default_factory=list)

    def validate(self, p: int) -> "SelmerGroupData":
        dim = len(self.generators)
        if len(self.sigma_matrix) != dim or any(len(r) != dim for r in self.sigma_matrix):
            raise ShapeError("action matrix shape mismatch")
        power = [[1 if i == j else 0 for j in range(dim)] for i in range(dim)]
        for _ in range(p):
            power = [
                [
                    sum(self.sigma_matrix[i][k] * power[k][j] for k in range(dim)) % p
                    for j in range(dim)
                ]
                for i in range(dim)
            ]
        if power != [[1 if i == j else 0 for j in range(dim)] for i in range(dim)]:
            raise ShapeError("action matrix does not have order dividing p")
        for label, vec in self.point_images.items():
            if len(vec) != dim:
                raise ShapeError(f"descent image of {label} has wrong dimension")
        return self

    def element_from_coords(self, coords: Sequence[int], p: int) -> SelmerElem:
        deg = len(self.torsion_poly) - 1
        acc = SelmerElem.constant(self.field_data, 1, deg)
        for gen, e in zip(self.generators, coords):
            if e % p:
                acc = selmer_mul(acc, selmer_pow(gen, e % p, self.torsion_poly), self.torsion_poly)
        return acc


@dataclass
class PairingCase:
    """Complete degree-p pairing instance: descent data plus places."""

    group: GroupData
    selmer: SelmerGroupData
    sigma_places: dict
    v_places: dict
    point_reductions: dict

    def validate(self) -> "PairingCase":
        if self.group.n != 1:
            raise ShapeError("the pairing pipeline computes degree-p layers only")
        self.selmer.validate(self.group.p)
        for label, pd in {**self.sigma_places, **self.v_places}.items():
            pd.validate(self.selmer.field_data, self.selmer.torsion_poly)
        return self


def mt_pair(p_label: str, q_label: str, case: PairingCase) -> AugClass:
    """Height pairing value as an augmentation class at level zero."""
    value, _ = mt_pair_detailed(p_label, q_label, case)
    return value


def mt_pair_detailed(p_label: str, q_label: str, case: PairingCase):
    """Pairing value plus the per-place, per-element audit trail.

    The accumulated coefficient of sigma^t is the sum over chosen places of
    the local duality pairing of the restricted conjugate class against the
    local Kummer class of the reduction of Q.  The class of the resulting
    element modulo squares of the augmentation ideal has exponent
    sum_t c_t * t; the coefficients must sum to zero mod p (reciprocity),
    otherwise the fixture is inconsistent.
    """
    group = case.group
    p = group.p
    if p_label not in case.selmer.point_images:
        raise InconsistentPlaces(f"no descent image recorded for point {p_label}")
    x_tilde = case.selmer.point_images[p_label]
    x_coords = trace_preimage(x_tilde, case.selmer.sigma_matrix, p)
    x_elem = case.selmer.element_from_coords(x_coords, p)

    audit = []
    coefficients = []
    for t in range(p):
        conj = g_act(t, x_elem)
        total = 0
        for label, place_data in sorted(case.sigma_places.items()):
            reductions = case.point_reductions.get(q_label)
            if reductions is None or label not in reductions:
                raise InconsistentPlaces(
                    f"no reduction of point {q_label} at place {label}"
                )
            q_red = reductions[label]
            restricted = restrict(conj, place_data, case.selmer.torsion_poly)
            k_image = kummer_image(place_data.place, q_red)
            contribution = local_tate(restricted, k_image, place_data.place)
            audit.append({"g": t, "place": label, "value": contribution})
            total = (total + contribution) % p
        coefficients.append(total)
    if sum(coefficients) % p != 0:
        raise InconsistentPlaces(
            f"reciprocity defect: local contributions sum to {sum(coefficients) % p} mod {p}"
        )
    exponent = sum(t * c for t, c in enumerate(coefficients)) % p
    return AugClass(group, 0, exponent), audit


def check_local_conditions(xi: SelmerElem, case: PairingCase) -> bool:
    """Membership of the restrictions in the local Kummer images at every
    place outside the chosen set (linear algebra over F_p).

    The span consists of the classes of points of the reduced curve, which
    all have valuation zero; a restriction carrying a non-trivial valuation
    (or one that cannot be evaluated at the place) therefore fails.
    """
    p = case.group.p
    for label, place_data in sorted(case.v_places.items()):
        try:
            restricted = restrict(xi, place_data, case.selmer.torsion_poly)
        except BadReduction:
            return False
        target = [
            restricted.at("S").v,
            restricted.at("S").u_exp,
            restricted.at("T").v,
            restricted.at("T").u_exp,
        ]
        span = []
        for point in place_data.place.curve.points():
            if point.is_infinity:
                continue
            img = kummer_image(place_data.place, point)
            vec = [0, img.at("S").u_exp, 0, img.at("T").u_exp]
            if any(vec):
                span.append(vec)
        if not plinalg.in_span_mod_p(span, target, p):
            return False
    return True
