"""Tests for character minors, delta factors, the congruence solver, the
regulator assembly and the unit-criterion verdict."""

import random
from fractions import Fraction

import pytest

from caseutil import build_roundtrip_case, random_table, transform_generator
from mtreg.errors import NonUnitEpsilon, PrecisionExhausted, ShapeError
from mtreg.exactnum import CycloNum
from mtreg.groupring import AugClass, Character, GroupData, GroupRingElem
from mtreg.regulator import (
    AnalyticInput,
    HeightMatrix,
    assemble_regulator,
    delta_psi,
    epsilon_minor,
    m_psi,
    reg_nt_psi,
    solve_psi,
    verify_theorem_main,
)
from mtreg.structure import MTTable, PointsStructure, StructuredMatrix

G31 = GroupData(3, 1)
G32 = GroupData(3, 2)


def psi_matrix_with_corner(structure, corner_value):
    group = structure.group
    upper = {}
    for rp in structure.lower_pairs():
        for cp in structure.lower_pairs():
            if rp == cp:
                upper[(rp, cp)] = GroupRingElem.one(group).scale(corner_value)
            else:
                upper[(rp, cp)] = GroupRingElem.zero(group)
    return StructuredMatrix.identity_shape(structure, upper)


class TestEpsilonMinor:
    def test_faithful_character_identity_block(self):
        st = PointsStructure(G31, (1, 1))
        mat = psi_matrix_with_corner(st, 2)
        faithful = Character(G31, 1)
        assert epsilon_minor(mat, faithful) == CycloNum.one(3, 1)

    def test_trivial_character_full_determinant(self):
        st = PointsStructure(G31, (1, 1))
        mat = psi_matrix_with_corner(st, 2)
        trivial = Character(G31, 0)
        assert epsilon_minor(mat, trivial) == CycloNum.rational(3, 1, 2)

    def test_block_diagonal_multiplicativity(self):
        st = PointsStructure(G31, (2, 1))
        group = G31
        upper = {}
        for rp in st.lower_pairs():
            for cp in st.lower_pairs():
                if rp == cp:
                    upper[(rp, cp)] = GroupRingElem(group, [2, 1, 0])
                else:
                    upper[(rp, cp)] = GroupRingElem.zero(group)
        mat = StructuredMatrix.identity_shape(st, upper)
        trivial = Character(group, 0)
        val = epsilon_minor(mat, trivial)
        # det of diag(3, 3, 1) after the trivial character
        assert val == CycloNum.rational(3, 1, 9)


class TestDeltaPsi:
    def test_trivial_empty_product(self):
        st = PointsStructure(G31, (1, 1))
        assert delta_psi(Character(G31, 0), st) == CycloNum.one(3, 1)

    def test_rank_one_faithful(self):
        st = PointsStructure(G31, (1, 0))
        val = delta_psi(Character(G31, 1), st)
        assert val == CycloNum.zeta_pow(3, 1, 1) - CycloNum.one(3, 1)

    def test_depth_two(self):
        st = PointsStructure(G32, (1, 1, 0))
        val = delta_psi(Character(G32, 1), st)
        z = CycloNum.zeta_pow
        expected = (z(3, 2, 1) - CycloNum.one(3, 2)) * (z(3, 2, 3) - CycloNum.one(3, 2))
        assert val == expected


class TestMPsiAndReg:
    def test_m_psi_values(self):
        st = PointsStructure(G31, (2, 1))
        assert m_psi(Character(G31, 0), st) == 2
        assert m_psi(Character(G31, 1), st) == 0

    def test_identity_heights(self):
        st = PointsStructure(G31, (2, 1))
        order = G31.order
        n = st.total
        raw = [
            [[Fraction(1 if (i == j and t == 0) else 0) for t in range(order)] for j in range(n)]
            for i in range(n)
        ]
        heights = HeightMatrix.from_raw(st, raw, mode="exact")
        trivial = Character(G31, 0)
        val = reg_nt_psi(heights, trivial)
        assert val == CycloNum.rational(3, 1, Fraction(1, 3 ** 4))
        faithful = Character(G31, 1)
        assert reg_nt_psi(heights, faithful) == CycloNum.one(3, 1)


class TestSolvePsi:
    def test_rank_direct_lift(self):
        st = PointsStructure(G31, (1, 1))
        table = MTTable(st, {((0, 1), (0, 1)): (AugClass(G31, 0, 2),)}).validate()
        psi_matrix = solve_psi(table)
        assert psi_matrix.entry((0, 1), (0, 1)).coeffs == (2, 0, 0)

    def test_depth_two_cross_level(self):
        st = PointsStructure(G32, (1, 1, 0))
        entries = {
            ((0, 1), (0, 1)): (AugClass(G32, 0, 0),),
            ((0, 1), (1, 1)): (AugClass(G32, 1, 1),),
            ((1, 1), (0, 1)): (AugClass(G32, 1, 0), AugClass(G32, 1, 0), AugClass(G32, 1, 0)),
            ((1, 1), (1, 1)): (AugClass(G32, 1, 1), AugClass(G32, 1, 0), AugClass(G32, 1, 0)),
        }
        table = MTTable(st, entries).validate()
        psi_matrix = solve_psi(table)
        assert psi_matrix.entry((0, 1), (1, 1)).coeffs == (1, 0, 0, 0, 0, 0, 0, 0, 0)

    def test_zero_table_degenerates_downstream(self):
        rng = random.Random(0)
        st = PointsStructure(G31, (1, 1))
        table = MTTable(st, {((0, 1), (0, 1)): (AugClass(G31, 0, 0),)}).validate()
        psi_matrix = solve_psi(table)
        raw = [[[Fraction(rng.randint(1, 5)) for _ in range(3)] for _ in range(2)] for _ in range(2)]
        heights = HeightMatrix.from_raw(st, raw, mode="exact")
        with pytest.raises(NonUnitEpsilon):
            assemble_regulator(heights, psi_matrix)


class TestAssembleRegulator:
    def test_projective_case(self):
        rng = random.Random(5)
        st = PointsStructure(G31, (0, 2))
        raw = [
            [[Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(3)] for _ in range(2)]
            for _ in range(2)
        ]
        heights = HeightMatrix.from_raw(st, raw, mode="exact")
        psi_matrix = solve_psi(MTTable(st, {}).validate())
        comps, sign = assemble_regulator(heights, psi_matrix)
        assert sign == 1
        for a in range(3):
            psi = Character(G31, a)
            assert comps[a] == reg_nt_psi(heights, psi) * delta_psi(psi, st)

    def test_sign_depends_on_lower_multiplicities(self):
        rng = random.Random(6)
        st = PointsStructure(G31, (1, 0))
        raw = [[[Fraction(rng.randint(1, 9)) for _ in range(3)]]]
        heights = HeightMatrix.from_raw(st, raw, mode="exact")
        table = random_table(st, rng)
        comps, sign = assemble_regulator(heights, solve_psi(table))
        assert sign == -1


class TestVerifyTheoremMain:
    def test_all_ones_passes(self):
        st = PointsStructure(G31, (1, 1))
        values = {a: CycloNum.one(3, 1) for a in range(3)}
        analytic = AnalyticInput(G31, values, "exact").validate()
        comps = {a: CycloNum.one(3, 1) for a in range(3)}
        report = verify_theorem_main(analytic, comps, st)
        assert report["verdict"] == "PASS"
        assert report["witness_coeffs"] == ["1", "0", "0"]

    def test_p_scaling_fails_uniformly(self):
        rng = random.Random(11)
        st = PointsStructure(G32, (1, 1, 1))
        raw, table, u, analytic = build_roundtrip_case(st, rng, "exact")
        heights = HeightMatrix.from_raw(st, raw, mode="exact")
        comps, _ = assemble_regulator(heights, solve_psi(table))
        base = verify_theorem_main(analytic, comps, st)
        assert base["verdict"] == "PASS"
        scaled = AnalyticInput(G32, {a: v * 3 for a, v in analytic.values.items()}, "exact")
        report = verify_theorem_main(scaled, comps, st)
        assert report["verdict"] == "FAIL"
        for v_base, v_scaled in zip(base["valuations"], report["valuations"]):
            if v_base is None:
                assert v_scaled is None
            else:
                assert v_scaled == v_base + 1

    def test_roundtrip_exact_recovers_unit(self):
        rng = random.Random(21)
        for m in [(1, 0), (2, 1), (1, 1, 0), (1, 1, 1)]:
            group = G31 if len(m) == 2 else G32
            st = PointsStructure(group, m)
            raw, table, u, analytic = build_roundtrip_case(st, rng, "exact")
            heights = HeightMatrix.from_raw(st, raw, mode="exact")
            comps, _ = assemble_regulator(heights, solve_psi(table))
            report = verify_theorem_main(analytic, comps, st)
            assert report["verdict"] == "PASS"
            assert report["witness_coeffs"] == [str(Fraction(c)) for c in u.coeffs]

    def test_roundtrip_float_j_sweep(self):
        rng = random.Random(31)
        st = PointsStructure(G32, (1, 1, 1))
        raw, table, u, analytic = build_roundtrip_case(st, rng, "float")
        heights = HeightMatrix.from_raw(st, raw, err=1e-13, mode="float")
        psi_matrix = solve_psi(table)
        for j in [1, 2, 4, 5, 7, 8]:
            comps, _ = assemble_regulator(heights, psi_matrix, j_idx=j)
            report = verify_theorem_main(analytic, comps, st, j_idx=j, tol=1e-8)
            assert report["verdict"] == "PASS", j
            assert report["witness_coeffs"] == [str(Fraction(c)) for c in u.coeffs]

    def test_generator_change_invariance(self):
        rng = random.Random(41)
        for m in [(1, 0), (2, 1), (1, 1, 1)]:
            group = G31 if len(m) == 2 else G32
            st = PointsStructure(group, m)
            raw, table, u, analytic = build_roundtrip_case(st, rng, "exact")
            heights = HeightMatrix.from_raw(st, raw, mode="exact")
            comps, _ = assemble_regulator(heights, solve_psi(table))
            base = verify_theorem_main(analytic, comps, st)["verdict"]
            for k in [2, 4] if group.n == 1 else [2, 4, 5]:
                if k % 3 == 0 or k >= group.order:
                    continue
                raw2, table2, analytic2 = transform_generator(st, raw, table, analytic, k)
                heights2 = HeightMatrix.from_raw(st, raw2, mode="exact")
                comps2, _ = assemble_regulator(heights2, solve_psi(table2))
                report2 = verify_theorem_main(analytic2, comps2, st)
                assert report2["verdict"] == base, (m, k)

    def test_precision_exhausted_on_wide_error(self):
        st = PointsStructure(G31, (0, 1))
        from mtreg.exactnum import ComplexApprox

        values = {a: ComplexApprox.of(1.0, 0.0, 0.5) for a in range(3)}
        analytic = AnalyticInput(G31, values, "float")
        comps = {a: ComplexApprox.exact(1.0) for a in range(3)}
        with pytest.raises(PrecisionExhausted):
            verify_theorem_main(analytic, comps, st, tol=1e-8)
