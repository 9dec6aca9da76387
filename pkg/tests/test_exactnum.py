"""Tests for exact cyclotomic arithmetic, residue integers and error intervals."""

import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mtreg.errors import BadExponent, NoConvergent, NotReal, PrecisionExhausted, ZeroInversion
from mtreg.exactnum import (
    ComplexApprox,
    CycloNum,
    ResidueInt,
    cyclo_invert,
    galois_map,
    rational_reconstruct,
)


def zeta(p=3, n=1, k=1):
    return CycloNum.zeta_pow(p, n, k)


class TestCycloNum:
    def test_invert_zeta(self):
        # zeta * zeta^2 = zeta^3 = 1 for p=3, n=1; zeta^2 = -1 - zeta
        inv = cyclo_invert(zeta())
        assert inv == CycloNum(3, 1, [-1, -1])
        assert inv * zeta() == CycloNum.one(3, 1)

    def test_invert_one(self):
        assert cyclo_invert(CycloNum.one(3, 1)) == CycloNum.one(3, 1)

    def test_invert_one_minus_zeta(self):
        # (1 - zeta)(2 + zeta) = 2 - zeta - zeta^2 = 3, so inverse is (2 + zeta)/3
        a = CycloNum.one(3, 1) - zeta()
        inv = cyclo_invert(a)
        assert inv == CycloNum(3, 1, [Fraction(2, 3), Fraction(1, 3)])
        assert a * inv == CycloNum.one(3, 1)

    def test_invert_zero_raises(self):
        with pytest.raises(ZeroInversion):
            cyclo_invert(CycloNum.zero(3, 1))

    def test_field_axioms_random(self):
        rng = random.Random(7)
        for p, n in [(3, 1), (3, 2), (5, 1)]:
            deg = CycloNum.degree(p, n)
            def rand():
                return CycloNum(p, n, [Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(deg)])
            for _ in range(25):
                a, b, c = rand(), rand(), rand()
                assert (a * b) * c == a * (b * c)
                assert a * (b + c) == a * b + a * c
                assert a + b == b + a
                if not a.is_zero():
                    assert a * cyclo_invert(a) == CycloNum.one(p, n)

    def test_galois_examples(self):
        # zeta -> zeta^2 = -1 - zeta
        assert galois_map(zeta(), 2) == CycloNum(3, 1, [-1, -1])
        # rationals are fixed
        five = CycloNum.rational(3, 1, 5)
        assert galois_map(five, 2) == five
        # 1 + zeta -> 1 + zeta^2 = -zeta
        a = CycloNum.one(3, 1) + zeta()
        assert galois_map(a, 2) == CycloNum(3, 1, [0, -1])

    def test_galois_bad_exponent(self):
        with pytest.raises(BadExponent):
            galois_map(zeta(), 3)

    def test_galois_is_ring_hom_and_composes(self):
        rng = random.Random(11)
        p, n = 3, 2
        deg = CycloNum.degree(p, n)
        def rand():
            return CycloNum(p, n, [Fraction(rng.randint(-3, 3)) for _ in range(deg)])
        for _ in range(20):
            a, b = rand(), rand()
            k, kp = rng.choice([1, 2, 4, 5, 7, 8]), rng.choice([1, 2, 4, 5, 7, 8])
            assert galois_map(a * b, k) == galois_map(a, k) * galois_map(b, k)
            assert galois_map(a + b, k) == galois_map(a, k) + galois_map(b, k)
            assert galois_map(galois_map(a, k), kp) == galois_map(a, (k * kp) % p ** n)

    def test_embed_matches_exp(self):
        val = zeta(3, 2, 1).embed(1)
        expected = complex(math.cos(2 * math.pi / 9), math.sin(2 * math.pi / 9))
        assert abs(complex(val.re, val.im) - expected) < 1e-12


cyclo_coeff = st.fractions(
    min_value=-10, max_value=10, max_denominator=6
)


@given(st.lists(cyclo_coeff, min_size=2, max_size=2), st.lists(cyclo_coeff, min_size=2, max_size=2))
@settings(max_examples=60, deadline=None)
def test_cyclo_inverse_property(ca, cb):
    a = CycloNum(3, 1, ca)
    b = CycloNum(3, 1, cb)
    if not a.is_zero():
        assert a * cyclo_invert(a) == CycloNum.one(3, 1)
    assert (a + b) * (a + b) == a * a + a * b * 2 + b * b


@given(st.integers(min_value=-10 ** 6, max_value=10 ** 6), st.integers(min_value=1, max_value=997))
@settings(max_examples=80, deadline=None)
def test_reconstruct_exact_rationals(num, den):
    q = Fraction(num, den)
    # binary rounding keeps float(q) within |q| * 2^-53 <= 1.2e-10 here,
    # far below the 1e-6 spacing of rationals with denominator <= 997
    got = rational_reconstruct(float(q), 1e-9, 1000)
    assert got == q


class TestResidueInt:
    def test_arithmetic(self):
        a = ResidueInt(81, 80)
        b = ResidueInt(81, 2)
        assert (a + b).value == 1
        assert (a * b).value == 79
        assert (-b).value == 79
        assert (a - b).value == 78

    def test_inverse(self):
        a = ResidueInt(27, 5)
        assert (a * a.inverse()).value == 1
        with pytest.raises(ZeroInversion):
            ResidueInt(27, 6).inverse()


class TestRationalReconstruct:
    def test_near_third(self):
        assert rational_reconstruct(0.333333333, 1e-6, 10 ** 6) == Fraction(1, 3)

    def test_exact_two(self):
        assert rational_reconstruct(2.0, 1e-9, 10 ** 6) == Fraction(2)

    def test_golden_ratio_no_convergent(self):
        with pytest.raises(NoConvergent):
            rational_reconstruct(1.6180339887, 1e-12, 10 ** 3)

    def test_not_real(self):
        with pytest.raises(NotReal):
            rational_reconstruct(ComplexApprox.of(0.5, 0.1), 1e-6, 100)

    def test_perturbed_rationals_recovered(self):
        rng = random.Random(3)
        max_den, tol = 1000, 1e-9
        for _ in range(200):
            den = rng.randint(1, max_den)
            num = rng.randint(-5 * den, 5 * den)
            q = Fraction(num, den)
            x = float(q) + rng.uniform(-tol / 2, tol / 2)
            assert rational_reconstruct(x, tol, max_den) == q


class TestComplexApprox:
    def test_err_conservative_random_ops(self):
        # exact complex-rational shadow arithmetic provides the ground truth
        rng = random.Random(2024)

        def exact_ops(op, x, y):
            if op == "+":
                return (x[0] + y[0], x[1] + y[1])
            if op == "-":
                return (x[0] - y[0], x[1] - y[1])
            if op == "*":
                return (x[0] * y[0] - x[1] * y[1], x[0] * y[1] + x[1] * y[0])
            d = y[0] * y[0] + y[1] * y[1]
            return ((x[0] * y[0] + x[1] * y[1]) / d, (x[1] * y[0] - x[0] * y[1]) / d)

        checked = 0
        while checked < 10 ** 4:
            ex = (Fraction(rng.randint(-50, 50), rng.randint(1, 9)),
                  Fraction(rng.randint(-50, 50), rng.randint(1, 9)))
            ey = (Fraction(rng.randint(-50, 50), rng.randint(1, 9)),
                  Fraction(rng.randint(-50, 50), rng.randint(1, 9)))
            ax = ComplexApprox.of(float(ex[0]), float(ex[1]), 1e-15)
            ay = ComplexApprox.of(float(ey[0]), float(ey[1]), 1e-15)
            for op in "+-*/":
                if op == "/" and ey == (0, 0):
                    continue
                try:
                    az = {"+": ax + ay, "-": ax - ay, "*": ax * ay, "/": ax / ay}[op]
                except PrecisionExhausted:
                    continue
                ez = exact_ops(op, ex, ey)
                diff = math.hypot(az.re - float(ez[0]), az.im - float(ez[1]))
                # float(ez) itself rounds; keep a one-ulp cushion on the check
                assert diff <= az.err + 1e-13 * (1 + diff), (op, ex, ey, diff, az.err)
                checked += 1

    def test_divide_by_interval_zero(self):
        small = ComplexApprox.of(1e-12, 0.0, 1e-10)
        with pytest.raises(PrecisionExhausted):
            ComplexApprox.exact(1.0) / small

    def test_unit_root_order(self):
        z = ComplexApprox.unit_root(9, 1)
        acc = ComplexApprox.exact(1.0)
        for _ in range(9):
            acc = acc * z
        assert abs(complex(acc.re, acc.im) - 1.0) <= acc.err + 1e-12
