"""The cyclic cubic base field y^3 - 3y + 1 and its mod-ell machinery.

Split primes of this field are exactly ell = +-1 mod 9; the generator of
the Galois group acts by y -> y^2 - 2.  For each split prime the three
roots form a single orbit under the reduced action, and prescribing a
polynomial's reduction at each of the three conjugate embeddings amounts
to interpolation through the roots (a Vandermonde solve).
"""

from __future__ import annotations

from fractions import Fraction

from .errors import GenerationError

MIN_POLY = (1, -3, 0, 1)  # ascending coefficients of y^3 - 3y + 1
SIGMA_MATRIX = ((1, -2, 4), (0, 0, -1), (0, 1, -1))  # columns: 1, sigma(y), sigma(y^2)


def roots_mod(ell: int) -> list[int]:
    out = [y for y in range(ell) if (y * y * y - 3 * y + 1) % ell == 0]
    if len(out) != 3:
        raise GenerationError(f"{ell} is not split in the cubic field")
    return out


def sigma_orbit(ell: int) -> list[int]:
    """The three roots ordered as rho, sigma(rho), sigma^2(rho)."""
    rho = roots_mod(ell)[0]
    orbit = [rho]
    for _ in range(2):
        orbit.append((orbit[-1] * orbit[-1] - 2) % ell)
    if sorted(orbit) != sorted(roots_mod(ell)):
        raise GenerationError(f"reduced action is not transitive at {ell}")
    return orbit


def interpolate(ell: int, values: list[int]) -> list[int]:
    """Coordinates (c0, c1, c2) mod ell of a field element with the given
    value at each conjugate root (Vandermonde solve by elimination)."""
    orbit = sigma_orbit(ell)
    rows = [[1, r % ell, (r * r) % ell, values[t] % ell] for t, r in enumerate(orbit)]
    n = 3
    for col in range(n):
        piv = next(i for i in range(col, n) if rows[i][col] % ell)
        rows[col], rows[piv] = rows[piv], rows[col]
        inv = pow(rows[col][col], -1, ell)
        rows[col] = [(x * inv) % ell for x in rows[col]]
        for i in range(n):
            if i != col and rows[i][col]:
                f = rows[i][col]
                rows[i] = [(x - f * y) % ell for x, y in zip(rows[i], rows[col])]
    return [rows[i][n] for i in range(n)]


def crt(residues: list[int], moduli: list[int]) -> tuple[int, int]:
    value, modulus = residues[0] % moduli[0], moduli[0]
    for r, m in zip(residues[1:], moduli[1:]):
        t = ((r - value) * pow(modulus, -1, m)) % m
        value += modulus * t
        modulus *= m
    return value % modulus, modulus


def centered(value: int, modulus: int) -> int:
    value %= modulus
    return value - modulus if value > modulus // 2 else value


def lift_poly_coeffs(per_place: dict[int, list[list[int]]], ells: list[int]):
    """CRT-combine per-place field-coordinate prescriptions into global
    rational (integer) coordinates; per_place[ell] is a list of coordinate
    triples, one per polynomial coefficient."""
    length = len(per_place[ells[0]])
    out = []
    for k in range(length):
        vec = []
        for coord in range(3):
            residues = [per_place[ell][k][coord] for ell in ells]
            value, modulus = crt(residues, ells)
            vec.append(Fraction(centered(value, modulus)))
        out.append(tuple(vec))
    return out
