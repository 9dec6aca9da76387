"""Engineering of self-consistent verification instances.

Pairing sections use two orbits of descent generators over eight chosen
places (two disjoint admissible halves of four places each, so the same
table is reproducible from either half) plus one validation place.  The
valuation pattern of each orbit is prescribed per place and conjugate; the
reductions of the named points are selected so that the reciprocity sums
vanish per half while the resulting pairing matrix is invertible mod 3.

Verification sections are synthesized backwards from the formulas: random
heights, the table solved from the measured pairing matrix, and analytic
values manufactured as character values of a hidden unit times regulator
components computed here in plain complex floats (independently of the
verification tool).
"""

from __future__ import annotations

import cmath
import itertools
import random
from fractions import Fraction

from . import cubicfield, smallec
from .errors import GenerationError

# (ell, a, b) per place: full rational 3-torsion, ell = 1 mod 9
SIGMA_PLACES_HALF1 = [(19, 0, 5), (37, 0, 9), (73, 0, 2), (109, 0, 1)]
SIGMA_PLACES_HALF2 = [(127, 0, 1), (163, 0, 9), (181, 0, 9), (199, 0, 2)]
V_PLACES = [(271, 0, 2)]

# per orbit: {place index within the eight sigma places: vanishing conjugate}
ORBIT_PATTERNS = [
    {0: 0, 1: 1, 4: 0, 5: 1},
    {2: 0, 3: 1, 6: 0, 7: 1},
]


class PlaceData:
    def __init__(self, ell, a, b, lam):
        self.ell, self.a, self.b = ell, a, b
        self.lam = lam
        s_pt, t_pt, zeta = smallec.canonical_basis(ell, a, b)
        self.s_pt, self.t_pt, self.zeta = s_pt, t_pt, zeta
        self.orbit = cubicfield.sigma_orbit(ell)
        self.w_s = (s_pt[1] + lam * s_pt[0]) % ell
        self.w_t = (t_pt[1] + lam * t_pt[0]) % ell
        self.torsion = smallec.order3_points(ell, a, b)
        self.w_values = [(y + lam * x) % ell for (x, y) in self.torsion]

    def w_distinct(self):
        return len(set(self.w_values)) == len(self.w_values)

    def local_f(self):
        coeffs = [1]
        for w in self.w_values:
            new = [0] * (len(coeffs) + 1)
            for i, c in enumerate(coeffs):
                new[i + 1] = (new[i + 1] + c) % self.ell
                new[i] = (new[i] - c * w) % self.ell
            coeffs = new
        return coeffs

    def t_class(self, q_pt):
        return smallec.descent_class(self.t_pt, q_pt, self.zeta, self.a, self.ell)


def choose_lambda(place_specs, max_shift=60):
    for lam in range(1, max_shift):
        places = [PlaceData(ell, a, b, lam) for (ell, a, b) in place_specs]
        if all(pl.w_distinct() for pl in places):
            return lam, places
    raise GenerationError("no shift separates the torsion values at all places")


def poly_eval_mod(coeffs, x, ell):
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % ell
    return acc


def _unit_prescription(rng, place, deg, forbid):
    while True:
        coeffs = [rng.randrange(place.ell) for _ in range(deg)]
        if all(poly_eval_mod(coeffs, w, place.ell) for w in forbid):
            return coeffs


def _vanishing_prescription(rng, place, deg, zero_at, forbid):
    while True:
        base = _unit_prescription(rng, place, deg - 1, forbid)
        shifted = [0] + base
        for i, c in enumerate(base):
            shifted[i] = (shifted[i] - c * zero_at) % place.ell
        if all(poly_eval_mod(shifted, w, place.ell) for w in forbid):
            return shifted


def build_orbit_generator(rng, places, v_places, pattern, deg=8):
    """Global polynomial whose conjugate reductions realize the pattern:
    the prescribed conjugate vanishes to first order at w_S of its place,
    everything else stays a unit at every recorded root."""
    per_place = {}
    all_places = list(places) + list(v_places)
    for idx, place in enumerate(all_places):
        forbid = [place.w_s, place.w_t]
        rows = []
        for t in range(3):
            if idx < len(places) and pattern.get(idx) == t:
                rows.append(_vanishing_prescription(rng, place, deg, place.w_s, [place.w_t]))
            else:
                rows.append(_unit_prescription(rng, place, deg, forbid))
        # interpolate each coefficient through the conjugate roots
        coeff_vectors = []
        for k in range(deg):
            coeff_vectors.append(cubicfield.interpolate(place.ell, [rows[t][k] for t in range(3)]))
        per_place[place.ell] = coeff_vectors
    ells = [pl.ell for pl in all_places]
    return cubicfield.lift_poly_coeffs(per_place, ells)


def choose_point_reductions(rng, places, targets):
    """One affine point per place whose descent class against the T basis
    function equals the target exponent."""
    out = []
    for place, target in zip(places, targets):
        candidates = smallec.curve_points(place.ell, place.a, place.b)
        rng.shuffle(candidates)
        for pt in candidates:
            if place.t_class(pt) == target % 3:
                out.append(pt)
                break
        else:
            raise GenerationError(f"no point with class {target} at {place.ell}")
    return out


def torsion_polynomial(places):
    per_place = {}
    for place in places:
        local = place.local_f()
        per_place[place.ell] = [cubicfield.interpolate(place.ell, [c, c, c]) for c in local]
    ells = [pl.ell for pl in places]
    return cubicfield.lift_poly_coeffs(per_place, ells)


# ---------------------------------------------------------------------------
# verification-side synthesis (degree-p layer, own complex floats)


def regulator_components(m, heights, psi_entries, p=3):
    """Character-indexed components for n = 1: per character a,
    sign * p^(-2 m_psi) * det(minor of chi_a(heights)) * delta / det(minor of chi_a(Psi))."""
    n_points = sum(m)
    order = p

    def chi(a, t):
        return cmath.exp(2j * cmath.pi * a * t / order)

    pairs = [(0, j) for j in range(1, m[0] + 1)] + [(1, j) for j in range(1, m[1] + 1)]
    sign = -1 if m[0] % 2 else 1
    components = {}
    for a in range(order):
        t_level = 0 if a == 0 else 1
        keep = [idx for idx, (r, _) in enumerate(pairs) if r >= t_level]
        mat = []
        for i in keep:
            row = []
            for j in keep:
                row.append(sum(heights[i][j][t] * chi(-a, t) for t in range(order)))
            mat.append(row)
        det_h = _det(mat)
        psi_mat = []
        for i in keep:
            row = []
            for j in keep:
                entry = psi_entries[i][j]
                row.append(sum(entry[t] * chi(a, t) for t in range(order)))
            psi_mat.append(row)
        det_psi = _det(psi_mat)
        if abs(det_psi) < 1e-9:
            raise GenerationError("character minor of the solved matrix vanishes")
        m_psi = sum((1 - r) * m[r] for r in range(t_level, 2))
        delta = 1.0
        if t_level >= 1:
            delta = (chi(a, 1) - 1.0) ** m[0]
        components[a] = sign * (p ** (-2 * m_psi)) * det_h * delta / det_psi
    return components


def _det(mat):
    n = len(mat)
    if n == 0:
        return 1.0
    if n == 1:
        return mat[0][0]
    total = 0.0
    for j in range(n):
        minor = [[mat[i][k] for k in range(n) if k != j] for i in range(1, n)]
        total += (-1) ** j * mat[0][j] * _det(minor)
    return total


def synthesize_verification(rng, m, mt_exponents, p=3):
    """Heights, solved-matrix entries, hidden unit and analytic values for
    a PASS instance with the given pairing exponents (keys ((r,j),(s,i)))."""
    n_points = sum(m)
    order = p
    heights = [
        [[rng.uniform(-4.0, 4.0) for _ in range(order)] for _ in range(n_points)]
        for _ in range(n_points)
    ]
    pairs = [(0, j) for j in range(1, m[0] + 1)] + [(1, j) for j in range(1, m[1] + 1)]
    psi_entries = []
    for i, rp in enumerate(pairs):
        row = []
        for j, cp in enumerate(pairs):
            if rp[0] == 0 and cp[0] == 0:
                exponent = mt_exponents[(rp, cp)]
                row.append([exponent % p] + [0] * (order - 1))
            else:
                row.append([1 if i == j else 0] + [0] * (order - 1))
        psi_entries.append(row)
    components = regulator_components(m, heights, psi_entries, p)
    while True:
        unit = [rng.randint(-4, 4) for _ in range(order)]
        if sum(unit) % p:
            break
    analytic = {}
    for a in range(order):
        chi_u = sum(unit[t] * cmath.exp(2j * cmath.pi * a * t / order) for t in range(order))
        analytic[a] = chi_u * components[a]
    return heights, psi_entries, unit, analytic
