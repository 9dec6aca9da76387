"""The mtreg-case/1 JSON schema: parsing, validation and serialization.

A case file carries everything one verification instance needs: the group
parameters and asserted hypotheses, the point-structure multiplicities, the
height matrix, the pairing table, the analytic leading terms, and (for
degree-p instances) the optional pairing-pipeline section with descent data
and places.  Parsing is strict: every violation raises SchemaError with the
JSON path of the offending value.  Serialization is canonical (sorted keys,
fixed separators), so serialize(parse(file)) is idempotent on canonical
files and reports are byte-reproducible.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional

from .errors import SchemaError, UnsupportedPlace
from .exactnum import ComplexApprox, CycloNum, is_prime
from .ffec import CurveFq, ECPointFq, Fq
from .groupring import AugClass, GroupData
from .localpair import LocalPlace
from .mazurtate import (
    NumberFieldData,
    PairingCase,
    PlaceRestrictionData,
    SelmerElem,
    SelmerGroupData,
)
from .regulator import AnalyticInput, HeightMatrix
from .structure import MTTable, PointsStructure

FORMAT_NAME = "mtreg-case/1"
HYPOTHESIS_FLAGS = ["a", "b", "c", "d", "e", "f", "g", "h", "i"]


def _expect(condition: bool, path: str, message: str):
    if not condition:
        raise SchemaError(path, message)


def _get(obj: dict, key: str, path: str, kind=None):
    _expect(isinstance(obj, dict), path, "expected an object")
    _expect(key in obj, f"{path}.{key}", "missing required field")
    value = obj[key]
    if kind is not None:
        _expect(isinstance(value, kind), f"{path}.{key}", f"expected {kind}")
    return value


def _parse_rational(value, path: str) -> Fraction:
    if isinstance(value, bool):
        raise SchemaError(path, "expected a rational")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise SchemaError(path, f"malformed rational: {value!r}") from exc
    raise SchemaError(path, f"expected int or 'num/den' string, got {type(value).__name__}")


def _rational_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass
class CaseFile:
    """Parsed and validated verification instance."""

    label: str
    group: GroupData
    hypotheses: list
    precision_m: int
    float_tol: float
    j_indices: list
    structure: PointsStructure
    heights: HeightMatrix
    table: MTTable
    analytic: AnalyticInput
    pairing: Optional[PairingCase] = None
    raw: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return self.raw


def canonical_dump(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def parse_case(data: dict, precision_override: Optional[int] = None) -> CaseFile:
    _expect(isinstance(data, dict), "$", "case file must be a JSON object")
    _expect(data.get("format") == FORMAT_NAME, "$.format", f"expected {FORMAT_NAME!r}")

    header = _get(data, "header", "$", dict)
    p = _get(header, "p", "$.header", int)
    n = _get(header, "n", "$.header", int)
    _expect(is_prime(p) and p % 2 == 1, "$.header.p", "p must be an odd prime")
    _expect(n >= 1, "$.header.n", "n must be >= 1")
    group = GroupData(p, n)
    label = header.get("label", "unnamed")

    hypotheses = _get(header, "hypotheses_asserted", "$.header", list)
    _expect(
        sorted(hypotheses) == HYPOTHESIS_FLAGS,
        "$.header.hypotheses_asserted",
        f"must assert exactly the flags {HYPOTHESIS_FLAGS}",
    )

    precision = _get(header, "precision", "$.header", dict)
    big_m = _get(precision, "M", "$.header.precision", int)
    _expect(big_m >= n + 1, "$.header.precision.M", "working precision too small")
    if precision_override is not None:
        big_m = precision_override
    float_tol = precision.get("float_tol", 1e-8)
    _expect(
        isinstance(float_tol, (int, float)) and float_tol > 0,
        "$.header.precision.float_tol",
        "must be a positive number",
    )

    j_indices = header.get("j_idx", [1])
    _expect(
        isinstance(j_indices, list) and j_indices,
        "$.header.j_idx",
        "must be a non-empty list",
    )
    for pos, j in enumerate(j_indices):
        _expect(
            isinstance(j, int) and j % p != 0,
            f"$.header.j_idx[{pos}]",
            "indices must be integers coprime to p",
        )

    structure_obj = _get(data, "structure", "$", dict)
    m_list = _get(structure_obj, "m", "$.structure", list)
    _expect(len(m_list) == n + 1, "$.structure.m", f"expected {n + 1} multiplicities")
    for pos, x in enumerate(m_list):
        _expect(isinstance(x, int) and x >= 0, f"$.structure.m[{pos}]", "must be >= 0")
    structure = PointsStructure(group, tuple(m_list))
    _expect(structure.total >= 1, "$.structure.m", "at least one point is required")

    heights = _parse_heights(_get(data, "heights", "$", dict), structure)
    table = _parse_table(_get(data, "mt_table", "$", dict), structure)
    analytic = _parse_analytic(_get(data, "analytic", "$", dict), group)

    pairing = None
    if "pairing_pipeline" in data and data["pairing_pipeline"] is not None:
        pairing = _parse_pairing(data["pairing_pipeline"], group)

    return CaseFile(
        label=label,
        group=group,
        hypotheses=list(hypotheses),
        precision_m=big_m,
        float_tol=float(float_tol),
        j_indices=list(j_indices),
        structure=structure,
        heights=heights,
        table=table,
        analytic=analytic,
        pairing=pairing,
        raw=data,
    )


def _parse_heights(obj: dict, structure: PointsStructure) -> HeightMatrix:
    mode = _get(obj, "mode", "$.heights", str)
    _expect(mode in ("exact", "float"), "$.heights.mode", "must be 'exact' or 'float'")
    values = _get(obj, "values", "$.heights", list)
    n = structure.total
    order = structure.group.order
    _expect(len(values) == n, "$.heights.values", f"expected {n} rows")
    parsed = []
    for i, row in enumerate(values):
        _expect(isinstance(row, list) and len(row) == n, f"$.heights.values[{i}]", f"expected {n} cells")
        prow = []
        for j, cell in enumerate(row):
            path = f"$.heights.values[{i}][{j}]"
            _expect(isinstance(cell, list) and len(cell) == order, path, f"expected {order} values")
            if mode == "exact":
                prow.append([_parse_rational(v, f"{path}[{k}]") for k, v in enumerate(cell)])
            else:
                for k, v in enumerate(cell):
                    _expect(
                        isinstance(v, (int, float)) and not isinstance(v, bool),
                        f"{path}[{k}]",
                        "expected a number",
                    )
                prow.append([float(v) for v in cell])
        parsed.append(prow)
    err = obj.get("err", 0.0)
    _expect(
        isinstance(err, (int, float)) and err >= 0,
        "$.heights.err",
        "must be a non-negative number",
    )
    return HeightMatrix.from_raw(structure, parsed, err=float(err), mode=mode)


def _parse_table(obj: dict, structure: PointsStructure) -> MTTable:
    entries = _get(obj, "entries", "$.mt_table", list)
    group = structure.group
    table = MTTable(structure)
    seen = set()
    for pos, entry in enumerate(entries):
        path = f"$.mt_table.entries[{pos}]"
        r = _get(entry, "r", path, int)
        j = _get(entry, "j", path, int)
        s = _get(entry, "s", path, int)
        i = _get(entry, "i", path, int)
        level = _get(entry, "level", path, int)
        _expect(0 <= r < group.n and 0 <= s < group.n, path, "indices must have r, s < n")
        _expect(1 <= j <= structure.m[r], f"{path}.j", "index out of range")
        _expect(1 <= i <= structure.m[s], f"{path}.i", "index out of range")
        _expect(level == max(r, s), f"{path}.level", f"level must be max(r, s) = {max(r, s)}")
        exps = _get(entry, "exponents", path, list)
        _expect(len(exps) == group.p ** r, f"{path}.exponents", f"expected {group.p ** r} values")
        modulus = group.p ** (group.n - level)
        classes = []
        for k, e in enumerate(exps):
            _expect(
                isinstance(e, int) and 0 <= e < modulus,
                f"{path}.exponents[{k}]",
                f"expected an integer in [0, {modulus})",
            )
            classes.append(AugClass(group, level, e))
        key = ((r, j), (s, i))
        _expect(key not in seen, path, "duplicate table entry")
        seen.add(key)
        table.entries[key] = tuple(classes)
    try:
        table.validate()
    except Exception as exc:
        raise SchemaError("$.mt_table", str(exc)) from exc
    return table


def _parse_analytic(obj: dict, group: GroupData) -> AnalyticInput:
    mode = _get(obj, "mode", "$.analytic", str)
    _expect(mode in ("exact", "float"), "$.analytic.mode", "must be 'exact' or 'float'")
    raw_values = _get(obj, "values", "$.analytic", list)
    _expect(
        len(raw_values) == group.order,
        "$.analytic.values",
        f"expected {group.order} entries",
    )
    values = {}
    for pos, entry in enumerate(raw_values):
        path = f"$.analytic.values[{pos}]"
        a = _get(entry, "a", path, int)
        _expect(0 <= a < group.order, f"{path}.a", "character index out of range")
        _expect(a not in values, f"{path}.a", "duplicate character index")
        if mode == "exact":
            coeffs = _get(entry, "coeffs", path, list)
            degree = CycloNum.degree(group.p, group.n)
            _expect(len(coeffs) == degree, f"{path}.coeffs", f"expected {degree} coordinates")
            values[a] = CycloNum(
                group.p, group.n, [_parse_rational(c, f"{path}.coeffs[{k}]") for k, c in enumerate(coeffs)]
            )
        else:
            re = _get(entry, "re", path, (int, float))
            im = entry.get("im", 0.0)
            err = entry.get("err", 0.0)
            values[a] = ComplexApprox.of(float(re), float(im), float(err))
    galois_flag = bool(obj.get("galois_consistent", False))
    analytic = AnalyticInput(group, values, mode, galois_flag)
    try:
        analytic.validate()
    except Exception as exc:
        raise SchemaError("$.analytic", str(exc)) from exc
    return analytic


def _parse_pairing(obj: dict, group: GroupData) -> PairingCase:
    path = "$.pairing_pipeline"
    _expect(group.n == 1, path, "the pairing pipeline requires n = 1")

    nf_obj = _get(obj, "number_field", path, dict)
    min_poly = [
        _parse_rational(c, f"{path}.number_field.min_poly[{k}]")
        for k, c in enumerate(_get(nf_obj, "min_poly", f"{path}.number_field", list))
    ]
    sigma_rows = _get(nf_obj, "sigma_matrix", f"{path}.number_field", list)
    sigma_matrix = tuple(
        tuple(
            _parse_rational(c, f"{path}.number_field.sigma_matrix[{i}][{k}]")
            for k, c in enumerate(row)
        )
        for i, row in enumerate(sigma_rows)
    )
    try:
        field_data = NumberFieldData(tuple(min_poly), sigma_matrix).validate()
    except Exception as exc:
        raise SchemaError(f"{path}.number_field", str(exc)) from exc
    _expect(
        field_data.degree == group.p,
        f"{path}.number_field.min_poly",
        f"field degree must equal p = {group.p}",
    )

    def parse_field_vec(raw, vpath):
        _expect(
            isinstance(raw, list) and len(raw) == field_data.degree,
            vpath,
            f"expected {field_data.degree} coordinates",
        )
        return tuple(_parse_rational(c, f"{vpath}[{k}]") for k, c in enumerate(raw))

    def parse_poly(raw, vpath, length):
        _expect(isinstance(raw, list) and len(raw) == length, vpath, f"expected {length} coefficients")
        return tuple(parse_field_vec(vec, f"{vpath}[{k}]") for k, vec in enumerate(raw))

    f_raw = _get(obj, "torsion_poly", path, list)
    torsion_poly = parse_poly(f_raw, f"{path}.torsion_poly", len(f_raw))
    deg_f = len(torsion_poly) - 1
    _expect(deg_f >= 1, f"{path}.torsion_poly", "torsion polynomial must be non-constant")
    lambda_shift = _parse_rational(obj.get("lambda_shift", 0), f"{path}.lambda_shift")

    selmer_obj = _get(obj, "selmer", path, dict)
    gens_raw = _get(selmer_obj, "generators", f"{path}.selmer", list)
    generators = [
        SelmerElem(field_data, parse_poly(g, f"{path}.selmer.generators[{k}]", deg_f))
        for k, g in enumerate(gens_raw)
    ]
    sig_raw = _get(selmer_obj, "sigma_matrix", f"{path}.selmer", list)
    sigma_action = []
    for i, row in enumerate(sig_raw):
        _expect(
            isinstance(row, list) and len(row) == len(generators),
            f"{path}.selmer.sigma_matrix[{i}]",
            "dimension mismatch with generators",
        )
        for k, v in enumerate(row):
            _expect(
                isinstance(v, int),
                f"{path}.selmer.sigma_matrix[{i}][{k}]",
                "expected an integer",
            )
        sigma_action.append([v % group.p for v in row])
    images_raw = _get(selmer_obj, "point_images", f"{path}.selmer", dict)
    point_images = {}
    for name, vec in images_raw.items():
        vpath = f"{path}.selmer.point_images.{name}"
        _expect(isinstance(vec, list) and len(vec) == len(generators), vpath, "dimension mismatch")
        point_images[name] = [int(v) % group.p for v in vec]
    controls_raw = selmer_obj.get("negative_controls", [])
    controls = [
        SelmerElem(field_data, parse_poly(g, f"{path}.selmer.negative_controls[{k}]", deg_f))
        for k, g in enumerate(controls_raw)
    ]
    selmer = SelmerGroupData(
        field_data=field_data,
        torsion_poly=torsion_poly,
        generators=generators,
        sigma_matrix=sigma_action,
        point_images=point_images,
        negative_controls=controls,
    )

    places_raw = _get(obj, "places", path, list)
    sigma_places = {}
    v_places = {}
    point_reductions: dict = {}
    for pos, pl in enumerate(places_raw):
        ppath = f"{path}.places[{pos}]"
        label = _get(pl, "label", ppath, str)
        role = _get(pl, "role", ppath, str)
        _expect(role in ("sigma", "V"), f"{ppath}.role", "role must be 'sigma' or 'V'")
        ell = _get(pl, "ell", ppath, int)
        degree = pl.get("degree", 1)
        _expect(degree == 1, f"{ppath}.degree", "pairing places must be split (degree 1)")
        _expect(ell != group.p, f"{ppath}.ell", "places must be tame (ell != p)")
        if pl.get("ramified", False):
            raise UnsupportedPlace(f"place {label} is declared ramified")
        curve_obj = _get(pl, "curve", ppath, dict)
        field = Fq(ell)
        try:
            curve = CurveFq(
                field,
                field.elem(_get(curve_obj, "a", f"{ppath}.curve", int)),
                field.elem(_get(curve_obj, "b", f"{ppath}.curve", int)),
            )
            place = LocalPlace.create(label, group.p, curve)
        except Exception as exc:
            raise SchemaError(f"{ppath}.curve", str(exc)) from exc
        if "basis_hint" in pl:
            hint = pl["basis_hint"]
            for key, pt in (("S", place.basis.S), ("T", place.basis.T)):
                got = _get(hint, key, f"{ppath}.basis_hint", list)
                _expect(
                    [pt.x.coeffs[0], pt.y.coeffs[0]] == [c % ell for c in got],
                    f"{ppath}.basis_hint.{key}",
                    "hint does not match the canonical torsion basis",
                )
        roots_obj = _get(pl, "root_images", ppath, dict)
        root_images = {}
        for key in ("S", "T"):
            val = _get(roots_obj, key, f"{ppath}.root_images", int)
            root_images[key] = field.elem(val)
        rho = _get(pl, "reduction_rho", ppath, int)
        basis_images = [field.one()]
        for _ in range(field_data.degree - 1):
            basis_images.append(basis_images[-1] * field.elem(rho))
        try:
            place_data = PlaceRestrictionData.create(
                place, basis_images, root_images, lambda_shift
            ).validate(field_data, torsion_poly)
        except Exception as exc:
            raise SchemaError(ppath, str(exc)) from exc
        if role == "sigma":
            sigma_places[label] = place_data
        else:
            v_places[label] = place_data
        for name, coords in pl.get("point_reductions", {}).items():
            rpath = f"{ppath}.point_reductions.{name}"
            if coords == "infinity":
                point = curve.infinity()
            else:
                _expect(isinstance(coords, list) and len(coords) == 2, rpath, "expected [x, y]")
                try:
                    point = curve.point(coords[0], coords[1])
                except ValueError as exc:
                    raise SchemaError(rpath, str(exc)) from exc
            point_reductions.setdefault(name, {})[label] = point

    case = PairingCase(group, selmer, sigma_places, v_places, point_reductions)
    try:
        case.validate()
    except Exception as exc:
        raise SchemaError(path, str(exc)) from exc
    return case


def load_case(path: str, precision_override: Optional[int] = None) -> CaseFile:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except FileNotFoundError:
        raise SchemaError("$", f"no such file: {path}")
    except json.JSONDecodeError as exc:
        raise SchemaError("$", f"invalid JSON: {exc}")
    return parse_case(data, precision_override)
