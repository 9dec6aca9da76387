"""Exact linear algebra over Z/p^M and F_p.

Systems over the local ring Z/p^M are decided through a Smith normal form
computed over Z with unimodular transforms, so solvability reduces to
per-diagonal divisibility conditions and no pivoting heuristics can give a
wrong answer.  Matrices at desk scale are small (a few dozen rows), so the
integer growth of the classical algorithm is harmless.
"""

from __future__ import annotations

import math
from typing import Optional, Sequence

Matrix = list[list[int]]


def _identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def _xgcd(a: int, b: int):
    x, nx = 1, 0
    y, ny = 0, 1
    g, ng = a, b
    while ng:
        q = g // ng
        x, nx = nx, x - q * nx
        y, ny = ny, y - q * ny
        g, ng = ng, g - q * ng
    if g < 0:
        x, y, g = -x, -y, -g
    return g, x, y


def smith_normal_form(a: Sequence[Sequence[int]]):
    """Return (diag, U, V) with U*A*V diagonal, U and V unimodular.

    ``diag`` is the full m x n matrix with non-zero entries only on the main
    diagonal (no divisibility normalization, which the solver does not need).
    """
    d = [list(row) for row in a]
    m = len(d)
    n = len(d[0]) if m else 0
    u = _identity(m)
    v = _identity(n)

    def row_combine(i1, i2, col):
        # zero out d[i2][col] using d[i1][col]
        x, y = d[i1][col], d[i2][col]
        if y == 0:
            return
        if x != 0 and y % x == 0:
            q = y // x
            for jj in range(n):
                d[i2][jj] -= q * d[i1][jj]
            for jj in range(m):
                u[i2][jj] -= q * u[i1][jj]
            return
        g, s, t = _xgcd(x, y)
        xp, yp = x // g, y // g
        for jj in range(n):
            a1, a2 = d[i1][jj], d[i2][jj]
            d[i1][jj] = s * a1 + t * a2
            d[i2][jj] = -yp * a1 + xp * a2
        for jj in range(m):
            a1, a2 = u[i1][jj], u[i2][jj]
            u[i1][jj] = s * a1 + t * a2
            u[i2][jj] = -yp * a1 + xp * a2

    def col_combine(j1, j2, row):
        x, y = d[row][j1], d[row][j2]
        if y == 0:
            return
        if x != 0 and y % x == 0:
            q = y // x
            for ii in range(m):
                d[ii][j2] -= q * d[ii][j1]
            for ii in range(n):
                v[ii][j2] -= q * v[ii][j1]
            return
        g, s, t = _xgcd(x, y)
        xp, yp = x // g, y // g
        for ii in range(m):
            a1, a2 = d[ii][j1], d[ii][j2]
            d[ii][j1] = s * a1 + t * a2
            d[ii][j2] = -yp * a1 + xp * a2
        for ii in range(n):
            a1, a2 = v[ii][j1], v[ii][j2]
            v[ii][j1] = s * a1 + t * a2
            v[ii][j2] = -yp * a1 + xp * a2

    k = 0
    while k < min(m, n):
        # find a pivot of minimal absolute value in the remaining block
        pivot = None
        best = None
        for i in range(k, m):
            for j in range(k, n):
                val = abs(d[i][j])
                if val and (best is None or val < best):
                    best = val
                    pivot = (i, j)
        if pivot is None:
            break
        pi, pj = pivot
        if pi != k:
            d[k], d[pi] = d[pi], d[k]
            u[k], u[pi] = u[pi], u[k]
        if pj != k:
            for row in d:
                row[k], row[pj] = row[pj], row[k]
            for row in v:
                row[k], row[pj] = row[pj], row[k]
        # clear the k-th row and column
        dirty = True
        while dirty:
            dirty = False
            for i in range(k + 1, m):
                if d[i][k]:
                    row_combine(k, i, k)
                    dirty = True
            for j in range(k + 1, n):
                if d[k][j]:
                    col_combine(k, j, k)
                    dirty = True
        k += 1
    return d, u, v


def _vp(x: int, p: int, cap: int) -> int:
    if x == 0:
        return cap
    v = 0
    while x % p == 0 and v < cap:
        x //= p
        v += 1
    return v


def solve_mod_prime_power(
    a: Sequence[Sequence[int]],
    b: Sequence[int],
    p: int,
    big_m: int,
) -> Optional[list[int]]:
    """One solution x of A x = b over Z/p^M, or None when inconsistent.

    Deterministic: free coordinates are zero and each determined coordinate
    takes its minimal non-negative representative.
    """
    sol, _ = solve_mod_prime_power_with_kernel(a, b, p, big_m)
    return sol


def solve_mod_prime_power_with_kernel(
    a: Sequence[Sequence[int]],
    b: Sequence[int],
    p: int,
    big_m: int,
):
    """Solve A x = b over Z/p^M and also return kernel generators of A."""
    modulus = p ** big_m
    m = len(a)
    n = len(a[0]) if m else 0
    if m == 0:
        return [0] * n, []
    diag, u, v = smith_normal_form(a)
    bp = [sum(u[i][j] * b[j] for j in range(m)) % modulus for i in range(m)]
    z = [0] * n
    kernel: list[list[int]] = []
    for i in range(min(m, n)):
        di = diag[i][i]
        vi = _vp(di % modulus, p, big_m)
        ci = bp[i]
        if vi >= big_m:
            # diagonal entry is 0 mod p^M: row demands c_i = 0, coordinate free
            if ci % modulus != 0:
                return None, []
            kernel.append([v[r][i] % modulus for r in range(n)])
            continue
        if _vp(ci, p, big_m) < vi:
            return None, []
        unit = (di % modulus) // (p ** vi)
        z[i] = ((ci // (p ** vi)) * pow(unit, -1, modulus)) % (p ** (big_m - vi))
        if vi > 0:
            shifted = [(v[r][i] * (p ** (big_m - vi))) % modulus for r in range(n)]
            if any(shifted):
                kernel.append(shifted)
    for i in range(min(m, n), m):
        if bp[i] % modulus != 0:
            return None, []
    for i in range(min(m, n), n):
        kernel.append([v[r][i] % modulus for r in range(n)])
    x = [sum(v[r][i] * z[i] for i in range(n)) % modulus for r in range(n)]
    return x, kernel


def image_size_log(a: Sequence[Sequence[int]], p: int, big_m: int) -> int:
    """log_p of the cardinality of the image of A acting on (Z/p^M)^n."""
    if not a:
        return 0
    diag, _, _ = smith_normal_form(a)
    total = 0
    for i in range(min(len(diag), len(diag[0]))):
        total += big_m - _vp(diag[i][i], p, big_m)
    return total


def kernel_size_log(a: Sequence[Sequence[int]], p: int, big_m: int) -> int:
    """log_p of the cardinality of the kernel of A acting on (Z/p^M)^n."""
    n = len(a[0]) if a else 0
    return n * big_m - image_size_log(a, p, big_m)


def invert_matrix_mod(a: Sequence[Sequence[int]], p: int, big_m: int) -> Optional[Matrix]:
    """Inverse of a square matrix over Z/p^M, or None when singular."""
    n = len(a)
    cols = []
    for j in range(n):
        e = [1 if i == j else 0 for i in range(n)]
        x = solve_mod_prime_power(a, e, p, big_m)
        if x is None:
            return None
        cols.append(x)
    return [[cols[j][i] for j in range(n)] for i in range(n)]


# ---------------------------------------------------------------------------
# F_p Gaussian elimination


def rref_mod_p(a: Sequence[Sequence[int]], p: int):
    """Reduced row echelon form mod prime p; returns (rows, pivot_columns)."""
    rows = [[x % p for x in row] for row in a]
    m = len(rows)
    n = len(rows[0]) if m else 0
    pivots = []
    r = 0
    for c in range(n):
        pr = next((i for i in range(r, m) if rows[i][c] % p), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = pow(rows[r][c], -1, p)
        rows[r] = [(x * inv) % p for x in rows[r]]
        for i in range(m):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return rows, pivots


def solve_mod_p(
    a: Sequence[Sequence[int]],
    b: Sequence[int],
    p: int,
    free_value: int = 0,
) -> Optional[list[int]]:
    """First solution of A x = b over F_p with free variables set to free_value."""
    m = len(a)
    n = len(a[0]) if m else 0
    aug = [list(row) + [b[i]] for i, row in enumerate(a)]
    rows, pivots = rref_mod_p(aug, p)
    for row in rows:
        if all(x == 0 for x in row[:-1]) and row[-1] % p:
            return None
    if any(c == n for c in pivots):
        return None
    x = [free_value % p] * n
    pivot_set = set(pivots)
    for r, c in enumerate(pivots):
        acc = rows[r][n]
        for j in range(n):
            if j != c and j not in pivot_set and rows[r][j]:
                acc -= rows[r][j] * x[j]
        x[c] = acc % p
    return x


def kernel_mod_p(a: Sequence[Sequence[int]], p: int) -> list[list[int]]:
    """Basis of the kernel of A over F_p."""
    m = len(a)
    n = len(a[0]) if m else 0
    rows, pivots = rref_mod_p(a, p)
    pivot_set = set(pivots)
    basis = []
    for j in range(n):
        if j in pivot_set:
            continue
        vec = [0] * n
        vec[j] = 1
        for r, c in enumerate(pivots):
            vec[c] = (-rows[r][j]) % p
        basis.append(vec)
    return basis


def in_span_mod_p(vectors: Sequence[Sequence[int]], target: Sequence[int], p: int) -> bool:
    """Membership of target in the F_p-span of the given vectors."""
    if not vectors:
        return all(x % p == 0 for x in target)
    cols = [[vec[i] % p for vec in vectors] for i in range(len(target))]
    return solve_mod_p(cols, list(target), p) is not None
