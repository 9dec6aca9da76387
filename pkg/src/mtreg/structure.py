"""Point structures, block matrices over the group ring, and pairing tables.

A point structure records the multiplicities m = (m_0, ..., m_n) of a
decomposition into free rank-one pieces over the quotients Gamma_r; indices
are the pairs (r, j) with j in [1, m_r], ordered lexicographically.

``StructuredMatrix`` is an N x N matrix of group-ring elements indexed by
those pairs.  The block shape used throughout has an arbitrary upper-left
block on indices with r, s < n, zero off-blocks and an identity lower-right
block on the level-n indices.

``MTTable`` stores, for each pair with r, s < n, the Gamma_r-indexed family
of height-pairing values as augmentation classes at level max(r, s).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .errors import ShapeError, TableLevelMismatch
from .groupring import AugClass, GroupData, GroupRingElem


@dataclass(frozen=True)
class PointsStructure:
    group: GroupData
    m: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "m", tuple(int(x) for x in self.m))
        if len(self.m) != self.group.n + 1:
            raise ShapeError(f"expected {self.group.n + 1} multiplicities, got {len(self.m)}")
        if any(x < 0 for x in self.m):
            raise ShapeError("multiplicities must be non-negative")

    @property
    def total(self) -> int:
        return sum(self.m)

    def pairs(self) -> list[tuple[int, int]]:
        """All (r, j) indices, r ascending then j ascending, j starting at 1."""
        return [(r, j) for r in range(self.group.n + 1) for j in range(1, self.m[r] + 1)]

    def lower_pairs(self) -> list[tuple[int, int]]:
        """Indices with r < n."""
        return [(r, j) for (r, j) in self.pairs() if r < self.group.n]

    def position(self, pair: tuple[int, int]) -> int:
        try:
            return self.pairs().index(pair)
        except ValueError:
            raise ShapeError(f"index {pair} outside structure {self.m}") from None


class StructuredMatrix:
    """Square matrix of group-ring elements indexed by structure pairs."""

    def __init__(self, structure: PointsStructure, entries: Sequence[Sequence[GroupRingElem]]):
        self.structure = structure
        n = structure.total
        if len(entries) != n or any(len(row) != n for row in entries):
            raise ShapeError(f"expected a {n} x {n} matrix")
        self.entries = [list(row) for row in entries]

    def entry(self, row_pair: tuple[int, int], col_pair: tuple[int, int]) -> GroupRingElem:
        s = self.structure
        return self.entries[s.position(row_pair)][s.position(col_pair)]

    @classmethod
    def identity_shape(cls, structure: PointsStructure, upper_left: Mapping) -> "StructuredMatrix":
        """Block matrix: given upper-left entries for r, s < n, identity on
        level-n indices, zero elsewhere."""
        group = structure.group
        pairs = structure.pairs()
        n_idx = structure.group.n
        rows = []
        for rp in pairs:
            row = []
            for cp in pairs:
                if rp[0] < n_idx and cp[0] < n_idx:
                    row.append(upper_left[(rp, cp)])
                elif rp == cp:
                    row.append(GroupRingElem.one(group))
                else:
                    row.append(GroupRingElem.zero(group))
            rows.append(row)
        return cls(structure, rows)

    def has_block_form(self) -> bool:
        """Zero off-blocks and identity on the level-n diagonal."""
        n_idx = self.structure.group.n
        group = self.structure.group
        one = GroupRingElem.one(group)
        for rp in self.structure.pairs():
            for cp in self.structure.pairs():
                e = self.entry(rp, cp)
                if rp[0] < n_idx and cp[0] < n_idx:
                    continue
                expected = one if rp == cp else GroupRingElem.zero(group)
                if [_norm_coeff(c) for c in e.coeffs] != [_norm_coeff(c) for c in expected.coeffs]:
                    return False
        return True

    def map_entries(self, f) -> "StructuredMatrix":
        return StructuredMatrix(self.structure, [[f(e) for e in row] for row in self.entries])


def _norm_coeff(c):
    from .exactnum import ResidueInt

    if isinstance(c, ResidueInt):
        return c.value % c.modulus
    return c


def det_expansion(rows: Sequence[Sequence]):
    """Determinant by minor expansion; works for any commutative coefficient
    type supporting +, * and unary -.  Empty matrix has determinant 1."""
    n = len(rows)
    if n == 0:
        return 1
    if n == 1:
        return rows[0][0]
    total = None
    for j in range(n):
        minor = [[rows[i][k] for k in range(n) if k != j] for i in range(1, n)]
        term = rows[0][j] * det_expansion(minor)
        if j % 2 == 1:
            term = -term
        total = term if total is None else total + term
    return total


def psi_minor_det(matrix: StructuredMatrix, psi, j_idx=None):
    """Determinant of the character-evaluated minor on indices r, s >= t_psi.

    Empty minor gives 1 (as an exact CycloNum in exact mode).  Entries are
    evaluated through the character first, so the result is a CycloNum for
    exact coefficients and a ComplexApprox when j_idx is supplied or the
    coefficients are floats.
    """
    from .exactnum import ComplexApprox, CycloNum
    from .groupring import apply_character

    t = psi.t
    pairs = [pair for pair in matrix.structure.pairs() if pair[0] >= t]
    group = matrix.structure.group
    if not pairs:
        if j_idx is not None:
            return ComplexApprox.exact(1.0)
        return CycloNum.one(group.p, group.n)
    rows = [
        [apply_character(matrix.entry(rp, cp), psi, j_idx=j_idx) for cp in pairs]
        for rp in pairs
    ]
    return det_expansion(rows)


@dataclass
class MTTable:
    """Height-pairing table: entries[((r, j), (s, i))] is the tuple of
    AugClass values (level max(r, s)) indexed by gammabar = sigmabar^t over
    Gamma_r; position t holds the pairing against gammabar * P_(r,j)."""

    structure: PointsStructure
    entries: dict = field(default_factory=dict)

    def validate(self):
        group = self.structure.group
        lower = set(self.structure.lower_pairs())
        expected_keys = {(rp, cp) for rp in lower for cp in lower}
        if set(self.entries) != expected_keys:
            missing = expected_keys - set(self.entries)
            extra = set(self.entries) - expected_keys
            raise ShapeError(f"table keys mismatch: missing {missing}, extra {extra}")
        for (rp, cp), values in self.entries.items():
            level = max(rp[0], cp[0])
            if len(values) != group.p ** rp[0]:
                raise ShapeError(f"entry {rp},{cp}: expected {group.p ** rp[0]} classes")
            for v in values:
                if not isinstance(v, AugClass) or v.level != level:
                    raise TableLevelMismatch(f"entry {rp},{cp}: expected level {level}")
            if rp[0] > cp[0]:
                # Galois equivariance: the dual point of level s < r is fixed
                # by sigma^(p^s), so the Gamma_r-family is periodic under
                # translation by its image
                step = group.p ** cp[0]
                size = group.p ** rp[0]
                for w in range(size):
                    if values[w] != values[(w + step) % size]:
                        raise ShapeError(
                            f"entry {rp},{cp}: family is not invariant under the "
                            f"stabilizer of the dual point"
                        )
        return self

    def value(self, row_pair, col_pair, t=0) -> AugClass:
        return self.entries[(row_pair, col_pair)][t]

    def __eq__(self, other):
        if not isinstance(other, MTTable):
            return NotImplemented
        return self.structure == other.structure and self.entries == other.entries

    def negated(self) -> "MTTable":
        return MTTable(
            self.structure,
            {key: tuple(-v for v in values) for key, values in self.entries.items()},
        )
