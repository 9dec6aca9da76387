"""Assembly and serialization of mtreg-case/1 documents."""

from __future__ import annotations

import json
from fractions import Fraction

HYPOTHESES = ["a", "b", "c", "d", "e", "f", "g", "h", "i"]


def rat(value) -> str:
    q = Fraction(value)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def dump(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def apply_sigma_coeff(vec, times=1):
    """Generator action on a field element in the power basis of the cubic."""
    from .cubicfield import SIGMA_MATRIX

    out = tuple(Fraction(c) for c in vec)
    for _ in range(times % 3):
        out = tuple(
            sum(Fraction(SIGMA_MATRIX[i][k]) * out[k] for k in range(3)) for i in range(3)
        )
    return out


def conjugate_poly(coeffs, times=1):
    return [apply_sigma_coeff(vec, times) for vec in coeffs]


def verification_sections(m, heights, analytic, mt_exponents, label, j_idx, err=1e-12):
    entries = []
    for ((r, j), (s, i)), exponent in sorted(mt_exponents.items()):
        entries.append(
            {"r": r, "j": j, "s": s, "i": i, "level": max(r, s), "exponents": [exponent % 3]}
        )
    return {
        "format": "mtreg-case/1",
        "header": {
            "p": 3,
            "n": 1,
            "label": label,
            "hypotheses_asserted": HYPOTHESES,
            "precision": {"M": 7, "float_tol": 1e-8},
            "j_idx": list(j_idx),
        },
        "structure": {"m": list(m)},
        "heights": {"mode": "float", "values": heights, "err": err},
        "mt_table": {"entries": entries},
        "analytic": {
            "mode": "float",
            "values": [
                {"a": a, "re": analytic[a].real, "im": analytic[a].imag, "err": err}
                for a in range(3)
            ],
        },
    }


def pairing_section(lam, torsion_poly, generators, point_images, controls,
                    sigma_places, v_places, point_reductions):
    """Places are PlaceData objects; reductions map point label -> per-place
    (x, y) pairs keyed by place label."""

    def poly_json(coeffs):
        return [[rat(c) for c in vec] for vec in coeffs]

    dim = len(generators)
    blocks = dim // 3
    sigma_matrix = [[0] * dim for _ in range(dim)]
    for b in range(blocks):
        base = 3 * b
        sigma_matrix[base + 1][base] = 1
        sigma_matrix[base + 2][base + 1] = 1
        sigma_matrix[base][base + 2] = 1

    places_json = []
    for role, places in (("sigma", sigma_places), ("V", v_places)):
        for place in places:
            label = f"ell{place.ell}"
            entry = {
                "label": label,
                "role": role,
                "ell": place.ell,
                "degree": 1,
                "curve": {"a": place.a, "b": place.b},
                "basis_hint": {"S": list(place.s_pt), "T": list(place.t_pt)},
                "root_images": {"S": place.w_s, "T": place.w_t},
                "reduction_rho": place.orbit[0],
                "point_reductions": {
                    name: list(reds[label])
                    for name, reds in sorted(point_reductions.items())
                    if label in reds
                },
            }
            places_json.append(entry)
    return {
        "number_field": {
            "min_poly": [rat(c) for c in (1, -3, 0, 1)],
            "sigma_matrix": [[rat(c) for c in row] for row in ((1, -2, 4), (0, 0, -1), (0, 1, -1))],
        },
        "torsion_poly": poly_json(torsion_poly),
        "lambda_shift": rat(lam),
        "selmer": {
            "generators": [poly_json(g) for g in generators],
            "sigma_matrix": sigma_matrix,
            "point_images": {k: list(v) for k, v in sorted(point_images.items())},
            "negative_controls": [poly_json(g) for g in controls],
        },
        "places": places_json,
    }
