"""Minimal elliptic-curve arithmetic over prime fields for p = 3 descent.

Independent of the verification tool on purpose: points are (x, y) integer
pairs (None for the point at infinity), and the degree-3 Miller function of
an order-3 point is its tangent line, which gives closed forms for the Weil
pairing and the descent classes.  Only what the generator needs is here.
"""

from __future__ import annotations

from .errors import GenerationError


def inv_mod(a: int, ell: int) -> int:
    return pow(a % ell, -1, ell)


def curve_points(ell: int, a: int, b: int):
    """All affine points of y^2 = x^3 + a x + b over F_ell."""
    squares = {}
    for y in range(ell):
        squares.setdefault((y * y) % ell, []).append(y)
    pts = []
    for x in range(ell):
        rhs = (x * x * x + a * x + b) % ell
        for y in squares.get(rhs, []):
            pts.append((x, y))
    return pts


def ec_neg(point, ell):
    if point is None:
        return None
    return (point[0], (-point[1]) % ell)


def ec_add(p1, p2, a: int, ell: int):
    if p1 is None:
        return p2
    if p2 is None:
        return p1
    x1, y1 = p1
    x2, y2 = p2
    if x1 == x2:
        if (y1 + y2) % ell == 0:
            return None
        lam = (3 * x1 * x1 + a) * inv_mod(2 * y1, ell) % ell
    else:
        lam = (y2 - y1) * inv_mod(x2 - x1, ell) % ell
    x3 = (lam * lam - x1 - x2) % ell
    y3 = (lam * (x1 - x3) - y1) % ell
    return (x3, y3)


def ec_mul(point, k: int, a: int, ell: int):
    if k < 0:
        return ec_mul(ec_neg(point, ell), -k, a, ell)
    acc = None
    base = point
    while k:
        if k & 1:
            acc = ec_add(acc, base, a, ell)
        base = ec_add(base, base, a, ell)
        k >>= 1
    return acc


def order3_points(ell: int, a: int, b: int):
    return [
        pt for pt in curve_points(ell, a, b) if ec_mul(pt, 3, a, ell) is None
    ]


def tangent_value(point, at, a: int, ell: int) -> int:
    """Value at ``at`` of the tangent line at an order-3 point: the Miller
    function with divisor 3(P) - 3(infinity)."""
    x0, y0 = point
    x1, y1 = at
    lam = (3 * x0 * x0 + a) * inv_mod(2 * y0, ell) % ell
    return ((y1 - y0) - lam * (x1 - x0)) % ell


def weil3(s_pt, t_pt, a: int, ell: int) -> int:
    """Weil pairing e_3(S, T) via tangent lines and one auxiliary shift:
    e_3 = [f_S(T+R)/f_S(R)] / [f_T(S-R)/f_T(-R)]."""
    if s_pt is None or t_pt is None:
        return 1
    b = _curve_b(s_pt, a, ell)
    for r_pt in curve_points(ell, a, b):
        pts = [
            ec_add(t_pt, r_pt, a, ell),
            r_pt,
            ec_add(s_pt, ec_neg(r_pt, ell), a, ell),
            ec_neg(r_pt, ell),
        ]
        if any(q is None for q in pts):
            continue
        if pts[0] == s_pt or pts[1] == s_pt or pts[2] == t_pt or pts[3] == t_pt:
            continue
        vals = [
            tangent_value(s_pt, pts[0], a, ell),
            tangent_value(s_pt, pts[1], a, ell),
            tangent_value(t_pt, pts[2], a, ell),
            tangent_value(t_pt, pts[3], a, ell),
        ]
        if any(v == 0 for v in vals):
            continue
        return vals[0] * inv_mod(vals[1], ell) * vals[3] * inv_mod(vals[2], ell) % ell
    raise GenerationError("no usable auxiliary shift for the Weil pairing")


def _curve_b(point, a, ell):
    x, y = point
    return (y * y - x * x * x - a * x) % ell


def canonical_basis(ell: int, a: int, b: int):
    """The canonical torsion basis: S is the smallest order-3 point in
    lexicographic order, T the smallest with non-trivial pairing; returns
    (S, T, zeta) with zeta = e_3(T, S).  Must match the verifier's rule."""
    pts = sorted(order3_points(ell, a, b))
    if len(pts) != 8:
        raise GenerationError(f"curve ({a},{b}) over F_{ell} lacks full 3-torsion")
    s_pt = pts[0]
    for cand in pts:
        if weil3(s_pt, cand, a, ell) != 1:
            return s_pt, cand, weil3(cand, s_pt, a, ell)
    raise GenerationError("no non-degenerate partner found")


def descent_class(s_pt, q_pt, zeta: int, a: int, ell: int) -> int:
    """Exponent k with (f_S(Q))^((ell-1)/3) = zeta^k, via the shift rule
    f_S((Q+R) - (R)) checked for two shifts."""
    cofactor = (ell - 1) // 3
    zeta_pows = {pow(zeta, k, ell): k for k in range(3)}
    results = []
    b = _curve_b(s_pt, a, ell)
    for r_pt in curve_points(ell, a, b):
        plus = ec_add(q_pt, r_pt, a, ell)
        if plus is None or plus == s_pt or r_pt == s_pt:
            continue
        v1 = tangent_value(s_pt, plus, a, ell)
        v2 = tangent_value(s_pt, r_pt, a, ell)
        if v1 == 0 or v2 == 0:
            continue
        w = pow(v1 * inv_mod(v2, ell) % ell, cofactor, ell)
        if w not in zeta_pows:
            raise GenerationError("descent value outside mu_3")
        results.append(zeta_pows[w])
        if len(results) == 2:
            break
    if len(results) < 2 or results[0] != results[1]:
        raise GenerationError("descent evaluation degenerate")
    return results[0]
