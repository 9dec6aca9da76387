"""Algebraic oracle for height-pairing tables over finite coefficient rings.

The module realizes the four-term exact sequence

    0 -> At --iota--> X --Theta--> X --pi--> Astar -> 0

over R = Z/p^M, where X is the free R[G]-module on basis elements b_(r,j),
At and Astar are direct sums of quotient group rings R[Gamma_r], iota sends
the (r,j) generator to Tr_{J_r} b_(r,j), Theta multiplies b_(r,j) by
sigma^(p^r) - 1 and pi projects onto dual coordinates.

Two independent computations of the same pairing table are provided:

* ``pairing_from_lambda`` reads the table off the inverse matrix of an
  automorphism phi directly (closed formula), and
* ``snake_bockstein`` chases the connecting homomorphism of the trace
  diagram explicitly (lift through Tr_{J_l}, apply Theta, read off the
  augmentation-class coordinates), asserting lift-independence per run.

``independence_check`` verifies that two legal solutions of the defining
congruences differ by a p-adic group-ring unit, via exact cyclotomic
character minors and Fourier inversion.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

from . import plinalg
from .errors import (
    IdealViolation,
    LiftFailure,
    NonUnitDenominator,
    ShapeError,
)
from .exactnum import CycloNum, ResidueInt
from .groupring import (
    AugClass,
    GroupData,
    GroupRingElem,
    fourier_invert,
    ideal_membership,
    is_unit_zp,
    project_rho,
)
from .structure import MTTable, PointsStructure, StructuredMatrix, det_expansion, psi_minor_det


def _residue_elem(group: GroupData, modulus: int, coeffs) -> GroupRingElem:
    return GroupRingElem(group, [ResidueInt(modulus, int(c)) for c in coeffs])


class SyzygyPresentation:
    """Explicit matrices of the four-term sequence over Z/p^M."""

    def __init__(self, structure: PointsStructure, precision: Optional[int] = None):
        self.structure = structure
        group = structure.group
        self.big_m = precision if precision is not None else group.n + 6
        self.modulus = group.p ** self.big_m
        self.pairs = structure.pairs()
        order = group.order
        self.x_dim = structure.total * order
        self.side_dims = [group.p ** r for (r, _) in self.pairs]
        self.side_offsets = []
        acc = 0
        for dim in self.side_dims:
            self.side_offsets.append(acc)
            acc += dim
        self.side_dim = acc
        self.iota = self._build_iota()
        self.theta = self._build_theta()
        self.pi = self._build_pi()

    # -- coordinates ---------------------------------------------------------
    def x_index(self, pair_pos: int, u: int) -> int:
        return pair_pos * self.structure.group.order + u

    def side_index(self, pair_pos: int, w: int) -> int:
        return self.side_offsets[pair_pos] + w

    # -- matrices ------------------------------------------------------------
    def _build_iota(self):
        group = self.structure.group
        order = group.order
        mat = [[0] * self.side_dim for _ in range(self.x_dim)]
        for pos, (r, _) in enumerate(self.pairs):
            step = group.p ** r
            for w in range(group.p ** r):
                col = self.side_index(pos, w)
                for t in range(group.subgroup_order(r)):
                    mat[self.x_index(pos, (w + step * t) % order)][col] += 1
        return mat

    def _build_theta(self):
        group = self.structure.group
        order = group.order
        mat = [[0] * self.x_dim for _ in range(self.x_dim)]
        for pos, (r, _) in enumerate(self.pairs):
            step = group.p ** r
            for u in range(order):
                col = self.x_index(pos, u)
                mat[self.x_index(pos, (u + step) % order)][col] += 1
                mat[self.x_index(pos, u)][col] -= 1
        return mat

    def _build_pi(self):
        group = self.structure.group
        order = group.order
        mat = [[0] * self.x_dim for _ in range(self.side_dim)]
        for pos, (r, _) in enumerate(self.pairs):
            for u in range(order):
                mat[self.side_index(pos, u % (group.p ** r))][self.x_index(pos, u)] += 1
        return mat

    def _compose_zero(self, outer, inner) -> bool:
        rows, mid, cols = len(outer), len(inner), len(inner[0])
        for i in range(rows):
            for j in range(cols):
                acc = sum(outer[i][k] * inner[k][j] for k in range(mid))
                if acc % self.modulus:
                    return False
        return True

    def validate_exactness(self) -> bool:
        """Composition-zero plus cardinality equalities at every node."""
        p, m = self.structure.group.p, self.big_m
        if not self._compose_zero(self.theta, self.iota):
            return False
        if not self._compose_zero(self.pi, self.theta):
            return False
        if plinalg.kernel_size_log(self.iota, p, m) != 0:
            return False
        if plinalg.image_size_log(self.iota, p, m) != plinalg.kernel_size_log(self.theta, p, m):
            return False
        if plinalg.image_size_log(self.theta, p, m) != plinalg.kernel_size_log(self.pi, p, m):
            return False
        if plinalg.image_size_log(self.pi, p, m) != self.side_dim * m:
            return False
        return True


class PhiMatrix(StructuredMatrix):
    """Block matrix over Z/p^M[G] representing an endomorphism of the sum
    of quotient group rings, fixing the level-n generators.

    Entries are group-ring elements with ResidueInt coefficients; the block
    shape has zero off-blocks and the identity on level-n indices.  Since
    the (s, i) generator is killed by sigma^(p^s) - 1, a valid column must
    satisfy rho_r(entry) * (sigmabar^(p^s) - 1) = 0 for every row with
    r > s (relative-trace divisibility); this is validated on construction.
    """

    def __init__(self, structure: PointsStructure, precision: int, entries):
        super().__init__(structure, entries)
        self.big_m = precision
        self.modulus = structure.group.p ** precision
        if not self.has_block_form():
            raise ShapeError("matrix does not have the required block form")
        self._validate_hom_constraint()

    def _validate_hom_constraint(self):
        group = self.structure.group
        for cp in self.structure.lower_pairs():
            s = cp[0]
            for rp in self.structure.lower_pairs():
                r = rp[0]
                if r <= s:
                    continue
                quot = group.quotient(r)
                projected = project_rho(self.entry(rp, cp), r)
                killer = GroupRingElem.sigma_power(
                    quot, group.p ** s, ResidueInt(self.modulus, 1), ResidueInt(self.modulus, 0)
                ) - GroupRingElem.one(quot, ResidueInt(self.modulus, 1), ResidueInt(self.modulus, 0))
                prod = projected * killer
                if any(c.value % self.modulus for c in prod.coeffs):
                    raise ShapeError(
                        f"entry {rp},{cp} does not act through a module map"
                    )

    @classmethod
    def from_upper_left(cls, structure: PointsStructure, precision: int, upper_left) -> "PhiMatrix":
        group = structure.group
        modulus = group.p ** precision
        one = GroupRingElem.one(group, ResidueInt(modulus, 1), ResidueInt(modulus, 0))
        zero = GroupRingElem.zero(group, ResidueInt(modulus, 0))
        pairs = structure.pairs()
        n_idx = group.n
        rows = []
        for rp in pairs:
            row = []
            for cp in pairs:
                if rp[0] < n_idx and cp[0] < n_idx:
                    row.append(upper_left[(rp, cp)])
                elif rp == cp:
                    row.append(one)
                else:
                    row.append(zero)
            rows.append(row)
        return cls(structure, precision, rows)

    def determinant(self) -> GroupRingElem:
        if not self.entries:
            return GroupRingElem.one(
                self.structure.group,
                ResidueInt(self.modulus, 1),
                ResidueInt(self.modulus, 0),
            )
        return det_expansion(self.entries)

    def is_invertible(self) -> bool:
        det = self.determinant()
        aug = sum(c.value for c in det.coeffs)
        return aug % self.structure.group.p != 0

    def inverse(self) -> "PhiMatrix":
        """Inverse of the block matrix; the upper-left block is inverted by
        the adjugate formula over the commutative ring Z/p^M[G]."""
        lower = self.structure.lower_pairs()
        k = len(lower)
        group = self.structure.group
        if k == 0:
            return self
        block = [[self.entry(rp, cp) for cp in lower] for rp in lower]
        det = det_expansion(block)
        det_inv = _group_ring_inverse(det, self.big_m)
        if det_inv is None:
            raise ShapeError("upper-left block is not invertible")
        inv_entries = {}
        for i, rp in enumerate(lower):
            for j, cp in enumerate(lower):
                minor = [
                    [block[r][c] for c in range(k) if c != i]
                    for r in range(k)
                    if r != j
                ]
                cof = det_expansion(minor) if k > 1 else GroupRingElem.one(
                    group, ResidueInt(self.modulus, 1), ResidueInt(self.modulus, 0)
                )
                if (i + j) % 2 == 1:
                    cof = -cof
                inv_entries[(rp, cp)] = cof * det_inv
        return PhiMatrix.from_upper_left(self.structure, self.big_m, inv_entries)


def _group_ring_inverse(x: GroupRingElem, big_m: int) -> Optional[GroupRingElem]:
    group = x.group
    p = group.p
    order = group.order
    coeffs = [c.value if isinstance(c, ResidueInt) else int(c) for c in x.coeffs]
    mat = [[coeffs[(k - t) % order] for t in range(order)] for k in range(order)]
    e0 = [1] + [0] * (order - 1)
    sol = plinalg.solve_mod_prime_power(mat, e0, p, big_m)
    if sol is None:
        return None
    return _residue_elem(group, p ** big_m, sol)


def random_phi(structure: PointsStructure, precision: int, rng: random.Random) -> PhiMatrix:
    """Random invertible PhiMatrix, resampled until the determinant is a unit.

    Entries below the diagonal blocks (r > s) are premultiplied by the
    relative trace sum_{t < p^(r-s)} sigma^(p^s t) so each column defines a
    module map.
    """
    group = structure.group
    modulus = group.p ** precision
    lower = structure.lower_pairs()
    while True:
        upper = {}
        for rp in lower:
            for cp in lower:
                coeffs = [rng.randrange(0, group.p ** min(precision, 3)) for _ in range(group.order)]
                entry = _residue_elem(group, modulus, coeffs)
                if rp[0] > cp[0]:
                    rel = GroupRingElem.from_dict(
                        group,
                        {group.p ** cp[0] * t: 1 for t in range(group.p ** (rp[0] - cp[0]))},
                        0,
                    )
                    rel = _residue_elem(group, modulus, rel.coeffs)
                    entry = entry * rel
                upper[(rp, cp)] = entry
        phi = PhiMatrix.from_upper_left(structure, precision, upper)
        if phi.is_invertible():
            return phi


def pairing_from_lambda(lam: PhiMatrix) -> MTTable:
    """Pairing table read off the matrix of phi^(-1) by the closed formula:
    with rho_r(Lambda_(r,j),(s,i)) = sum_gamma a_gamma gamma, the pairing
    <Pt_(s,i), gamma P_(r,j)> at level l = max(r, s) is the class of
    -a_gamma against sigma^(p^l) - 1."""
    structure = lam.structure
    group = structure.group
    table = MTTable(structure)
    for rp in structure.lower_pairs():
        for cp in structure.lower_pairs():
            level = max(rp[0], cp[0])
            entry = lam.entry(rp, cp)
            projected = project_rho(entry, rp[0])
            values = []
            for w in range(group.p ** rp[0]):
                a_w = projected.coeffs[w]
                a_int = a_w.value if isinstance(a_w, ResidueInt) else int(a_w)
                values.append(AugClass(group, level, -a_int))
            table.entries[(rp, cp)] = tuple(values)
    return table.validate()


def snake_bockstein(phi: PhiMatrix, level: int) -> MTTable:
    """Connecting-homomorphism chase at the given level.

    Computes, for each dual generator of level s <= l, a lift x of
    iota(phi^(-1) Pt_(s,i)) through Tr_{J_l}, applies Theta, decomposes the
    result over the augmentation ideal of J_l and reads off the pairing
    values; entries are produced for the pairs with max(r, s) = level.
    The chase is repeated with a second lift and must agree.
    """
    structure = phi.structure
    group = structure.group
    if not 0 <= level <= group.n - 1:
        raise ShapeError(f"level {level} out of range [0, {group.n - 1}]")
    lam = phi.inverse()
    syz = SyzygyPresentation(structure, phi.big_m)
    p, big_m = group.p, phi.big_m
    modulus = p ** big_m
    order = group.order
    step = p ** level
    per_coset = group.subgroup_order(level)

    # Tr_{J_level} as an operator on X
    trace_op = [[0] * syz.x_dim for _ in range(syz.x_dim)]
    for pos in range(structure.total):
        for u in range(order):
            col = syz.x_index(pos, u)
            for t in range(per_coset):
                trace_op[syz.x_index(pos, (u + step * t) % order)][col] += 1

    table = MTTable(structure)
    lower = structure.lower_pairs()
    for cp in lower:              # cp = (s, i), the dual-generator index
        s = cp[0]
        if s > level:
            continue
        z = _iota_of_lambda_column(syz, lam, cp)
        x, kernel = plinalg.solve_mod_prime_power_with_kernel(trace_op, z, p, big_m)
        if x is None:
            raise LiftFailure(f"no lift through the trace operator for {cp}")
        rows = _chase_read(syz, x, level)
        # repeat with a second lift; the class must not depend on it
        if kernel:
            x2 = [(a + b) % modulus for a, b in zip(x, kernel[0])]
            if _chase_read(syz, x2, level) != rows:
                raise LiftFailure(f"lift-dependent connecting value for {cp}")
        for rp in lower:
            if max(rp[0], s) != level:
                continue
            values = tuple(
                AugClass(group, level, -v) for v in rows[structure.pairs().index(rp)]
            )
            table.entries[(rp, cp)] = values
    # drop keys not at this level and validate shapes manually
    for key, values in table.entries.items():
        if len(values) != group.p ** key[0][0]:
            raise ShapeError("malformed chase output")
    return table


def _iota_of_lambda_column(syz: SyzygyPresentation, lam: PhiMatrix, cp) -> list[int]:
    """Coordinates of iota(phi^(-1) Pt_cp) = sum_(r,j) Lambda_(r,j),cp Tr_{J_r} b_(r,j)."""
    structure = syz.structure
    group = structure.group
    order = group.order
    z = [0] * syz.x_dim
    for pos, rp in enumerate(structure.pairs()):
        entry = lam.entry(rp, cp) if (rp[0] < group.n and cp[0] < group.n) else None
        if entry is None:
            coeffs = [0] * order
            if rp == cp:
                coeffs[0] = 1
            else:
                continue
        else:
            coeffs = [c.value for c in entry.coeffs]
        step = group.p ** rp[0]
        for u, c in enumerate(coeffs):
            if c == 0:
                continue
            for t in range(group.subgroup_order(rp[0])):
                z[syz.x_index(pos, (u + step * t) % order)] = (
                    z[syz.x_index(pos, (u + step * t) % order)] + c
                ) % syz.modulus
    return z


def _chase_read(syz: SyzygyPresentation, x: list[int], level: int) -> list[list[int]]:
    """Apply Theta, decompose over I(J_level) and read augmentation classes.

    Returns, per structure pair (r, j), the list over w < p^r of the class
    coordinates sum_t t * a_(c = w mod p^r, t) mod p^(n - level).
    """
    structure = syz.structure
    group = structure.group
    order = group.order
    p = group.p
    modulus = syz.modulus
    step = p ** level
    per_coset = group.subgroup_order(level)
    class_mod = p ** (group.n - level)

    y = [0] * syz.x_dim
    for i in range(syz.x_dim):
        acc = 0
        for j in range(syz.x_dim):
            if syz.theta[i][j]:
                acc += syz.theta[i][j] * x[j]
        y[i] = acc % modulus

    out = []
    for pos, (r, _) in enumerate(structure.pairs()):
        # coinvariant target: indices mod p^min(r, level)
        gamma_size = p ** min(r, level)
        acc_w = [0] * gamma_size
        for c in range(step):
            coset_coeffs = [y[syz.x_index(pos, (c + step * t) % order)] for t in range(per_coset)]
            if sum(coset_coeffs) % modulus:
                raise LiftFailure("Theta image does not lie in the augmentation ideal")
            w = c % gamma_size
            for t, a in enumerate(coset_coeffs):
                acc_w[w] = (acc_w[w] + t * a) % class_mod
        out.append([v % class_mod for v in acc_w])
    return out


def oracle_table(phi: PhiMatrix) -> MTTable:
    """Union of the snake chases over every level: the full pairing table."""
    structure = phi.structure
    table = MTTable(structure)
    for level in range(structure.group.n):
        part = snake_bockstein(phi, level)
        table.entries.update(part.entries)
    return table.validate()


def independence_check(
    psi_one: StructuredMatrix,
    psi_two: StructuredMatrix,
    precision: Optional[int] = None,
):
    """Decide whether two solutions of the defining congruences differ by a
    p-adic group-ring unit; returns (is_unit, witness element).

    Preconditions are validated first: for every lower pair the scaled
    difference p^(l-r) (Psi1 - Psi2) must lie in the ideal generated by
    sigma^(p^r) - 1 and Tr_{J_r}, else IdealViolation is raised.  A zero
    character minor of the second matrix raises NonUnitDenominator.
    """
    structure = psi_one.structure
    if structure != psi_two.structure:
        raise ShapeError("structures differ")
    group = structure.group
    big_m = precision if precision is not None else group.n + 6
    for rp in structure.lower_pairs():
        for cp in structure.lower_pairs():
            level = max(rp[0], cp[0])
            diff = psi_one.entry(rp, cp) - psi_two.entry(rp, cp)
            scaled = diff.scale(group.p ** (level - rp[0]))
            scaled_int = GroupRingElem(group, [int(c) for c in scaled.coeffs])
            if not ideal_membership(scaled_int, rp[0], big_m):
                raise IdealViolation(
                    f"entries at {rp},{cp} do not satisfy the same congruence"
                )
            if rp[0] > cp[0]:
                # solutions must also act through module maps: the image of
                # the entry in the quotient ring is killed by the stabilizer
                # of the lower-level dual point
                for mat in (psi_one, psi_two):
                    quot = group.quotient(rp[0])
                    projected = project_rho(mat.entry(rp, cp), rp[0])
                    killer = GroupRingElem.sigma_power(quot, group.p ** cp[0]) - GroupRingElem.one(quot)
                    prod = projected * killer
                    if any(int(c) != 0 for c in prod.coeffs):
                        raise IdealViolation(
                            f"entry at {rp},{cp} does not act through a module map"
                        )
    quotients = {}
    for psi in group.characters():
        num = psi_minor_det(psi_one, psi)
        den = psi_minor_det(psi_two, psi)
        if den.is_zero():
            raise NonUnitDenominator(f"character minor vanishes for a={psi.a}")
        quotients[psi] = num / den
    witness = fourier_invert(quotients, group)
    return is_unit_zp(witness), witness
