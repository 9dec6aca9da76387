"""Tests for the cyclic group ring layer: projections, characters, Fourier
inversion, the p-adic unit criterion and augmentation-ideal membership."""

import random
from fractions import Fraction

import pytest

from mtreg import plinalg
from mtreg.errors import NotGaloisStable, NotPIntegral
from mtreg.exactnum import CycloNum, ResidueInt
from mtreg.groupring import (
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

G31 = GroupData(3, 1)
G32 = GroupData(3, 2)


def elem(group, *coeffs):
    return GroupRingElem(group, list(coeffs))


class TestGroupData:
    def test_ladder(self):
        assert G32.order == 9
        assert G32.subgroup_order(0) == 9
        assert G32.subgroup_order(2) == 1
        assert G32.quotient(1).order == 3

    def test_rejects_even_prime(self):
        with pytest.raises(ValueError):
            GroupData(2, 1)


class TestCharacter:
    def test_kernel_level(self):
        assert Character(G32, 0).t == 0
        assert Character(G32, 3).t == 1
        assert Character(G32, 1).t == 2
        assert Character(G32, 6).t == 1

    def test_contragredient(self):
        assert Character(G31, 1).contragredient().a == 2


class TestProjectRho:
    def test_to_trivial_group_is_augmentation(self):
        x = elem(G31, 1, 2, 0)
        y = project_rho(x, 0)
        assert y.group.order == 1
        assert y.coeffs == (3,)

    def test_identity_at_top_level(self):
        x = elem(G31, 5, -1, 2)
        assert project_rho(x, 1) == x

    def test_fold_level_one(self):
        # sigma + sigma^4 -> 2 sigmabar inside Z[Gamma_1]
        x = GroupRingElem.from_dict(G32, {1: 1, 4: 1})
        y = project_rho(x, 1)
        assert y.coeffs == (0, 2, 0)

    def test_ring_homomorphism(self):
        rng = random.Random(5)
        for _ in range(30):
            x = GroupRingElem(G32, [rng.randint(-4, 4) for _ in range(9)])
            y = GroupRingElem(G32, [rng.randint(-4, 4) for _ in range(9)])
            r = rng.randint(0, 2)
            assert project_rho(x * y, r) == project_rho(x, r) * project_rho(y, r)


class TestApplyCharacter:
    def test_trace_orthogonality(self):
        trace = GroupRingElem.trace_subgroup(G31, 0)
        assert apply_character(trace, Character(G31, 1)).is_zero()
        assert apply_character(trace, Character(G31, 0)) == CycloNum.rational(3, 1, 3)

    def test_linear_element(self):
        x = elem(G31, 1, 1, 0)
        val = apply_character(x, Character(G31, 1))
        assert val == CycloNum.one(3, 1) + CycloNum.zeta_pow(3, 1, 1)

    def test_hom_property(self):
        rng = random.Random(9)
        psi = Character(G32, 2)
        for _ in range(20):
            x = GroupRingElem(G32, [rng.randint(-3, 3) for _ in range(9)])
            y = GroupRingElem(G32, [rng.randint(-3, 3) for _ in range(9)])
            assert apply_character(x * y, psi) == apply_character(x, psi) * apply_character(y, psi)


class TestIsUnitZp:
    def test_simple(self):
        assert is_unit_zp(elem(G31, 1, 1, 0)) is True
        assert is_unit_zp(elem(G31, 1, -1, 0)) is False

    def test_augmentation_eight(self):
        x = elem(G31, 2, 3, 3)
        assert is_unit_zp(x) is True
        # cross-check: multiplication-by-x matrix is invertible mod 3^6
        mat = _mult_matrix(x)
        assert plinalg.invert_matrix_mod(mat, 3, 6) is not None

    def test_not_p_integral(self):
        with pytest.raises(NotPIntegral):
            is_unit_zp(elem(G31, Fraction(1, 3), 0, 0))

    def test_matches_brute_force_inversion(self):
        rng = random.Random(17)
        for group in (G31, G32):
            for _ in range(25):
                x = GroupRingElem(group, [rng.randint(-9, 9) for _ in range(group.order)])
                unit = is_unit_zp(x)
                for big_m in (1, 4, 8):
                    invertible = plinalg.invert_matrix_mod(_mult_matrix(x), group.p, big_m) is not None
                    assert invertible == unit, (x, big_m)


def _mult_matrix(x: GroupRingElem):
    order = x.group.order
    cols = []
    for t in range(order):
        shifted = [x.coeffs[(k - t) % order] for k in range(order)]
        cols.append(shifted)
    return [[cols[j][i] for j in range(order)] for i in range(order)]


class TestFourier:
    def test_constant_one(self):
        values = {psi: CycloNum.one(3, 1) for psi in G31.characters()}
        assert fourier_invert(values, G31) == GroupRingElem.one(G31, Fraction(1), Fraction(0))

    def test_sigma(self):
        values = {psi: psi.value_exact(1) for psi in G31.characters()}
        out = fourier_invert(values, G31)
        assert out == GroupRingElem(G31, [Fraction(0), Fraction(1), Fraction(0)])

    def test_trace_from_trivial_support(self):
        values = {
            psi: CycloNum.rational(3, 1, 3 if psi.is_trivial else 0) for psi in G31.characters()
        }
        out = fourier_invert(values, G31)
        assert out == GroupRingElem(G31, [Fraction(1)] * 3)

    def test_roundtrip_random(self):
        rng = random.Random(23)
        for group in (G31, G32):
            for _ in range(100):
                x = GroupRingElem(group, [rng.randint(-20, 20) for _ in range(group.order)])
                values = {psi: apply_character(x, psi) for psi in group.characters()}
                back = fourier_invert(values, group)
                assert back.coeffs == tuple(Fraction(c) for c in x.coeffs)

    def test_irrational_rejected(self):
        values = {psi: CycloNum.zeta_pow(3, 1, 0) for psi in G31.characters()}
        values[Character(G31, 1)] = CycloNum.zeta_pow(3, 1, 1) + CycloNum.one(3, 1)
        with pytest.raises(NotGaloisStable):
            fourier_invert(values, G31)

    def test_float_mode_roundtrip(self):
        rng = random.Random(29)
        for _ in range(10):
            x = GroupRingElem(G31, [rng.randint(-9, 9) for _ in range(3)])
            values = {psi: apply_character(x, psi, j_idx=1) for psi in G31.characters()}
            back = fourier_invert(values, G31, j_idx=1, tol=1e-8)
            assert back.coeffs == tuple(Fraction(c) for c in x.coeffs)


class TestIdealMembership:
    def test_generators(self):
        x = GroupRingElem.sigma_power(G31, 3 ** 0) - GroupRingElem.one(G31)
        assert ideal_membership(x, 0) is True
        assert ideal_membership(GroupRingElem.trace_subgroup(G31, 0), 0) is True

    def test_one_not_in_level_zero_ideal(self):
        assert ideal_membership(GroupRingElem.one(G31), 0, precision=4) is False

    def test_ideal_closure(self):
        rng = random.Random(31)
        group = G32
        gen1 = GroupRingElem.sigma_power(group, 3) - GroupRingElem.one(group)
        gen2 = GroupRingElem.trace_subgroup(group, 1)
        for _ in range(20):
            u = GroupRingElem(group, [rng.randint(-3, 3) for _ in range(9)])
            v = GroupRingElem(group, [rng.randint(-3, 3) for _ in range(9)])
            member = gen1 * u + gen2 * v
            assert ideal_membership(member, 1) is True
            w = GroupRingElem(group, [rng.randint(-3, 3) for _ in range(9)])
            assert ideal_membership(member * w, 1) is True


class TestAugClass:
    def test_group_law(self):
        a = AugClass(G32, 1, 1)
        b = AugClass(G32, 1, 2)
        assert (a + b).exponent == 0  # modulus 3 at level 1
        assert (-a).exponent == 2

    def test_iso_with_subgroup_brute_force(self):
        # (sigma^(p^l))^a - 1 = a (sigma^(p^l) - 1) mod I^2, checked by
        # expressing the difference inside the span of I^2 over Z/p^M
        for group, level in [(G31, 0), (G32, 0), (G32, 1)]:
            p, big_m = group.p, group.n + 6
            sub_order = group.subgroup_order(level)
            step = p ** level
            gens = []
            # I_p(J_level) generated by sigma^(step*t) - 1
            basis = [
                GroupRingElem.sigma_power(group, step * t) - GroupRingElem.one(group)
                for t in range(1, sub_order)
            ]
            for x in basis:
                for y in basis:
                    gens.append(x * y)
            cols = [g.int_coeffs() for g in gens]
            matrix = [[cols[j][i] for j in range(len(cols))] for i in range(group.order)]
            for a in range(sub_order):
                lhs = GroupRingElem.sigma_power(group, step * a) - GroupRingElem.one(group)
                rhs = (GroupRingElem.sigma_power(group, step) - GroupRingElem.one(group)).scale(a)
                diff = (lhs - rhs).int_coeffs()
                sol = plinalg.solve_mod_prime_power(matrix, diff, p, big_m)
                assert sol is not None, (group, level, a)
