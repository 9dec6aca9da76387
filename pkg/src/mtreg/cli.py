"""Command-line interface: mtreg verify | pair | oracle | validate.

Exit codes are part of the stable interface: 0 means success (all verdicts
PASS where applicable), 2 means an honest FAIL verdict, 3 means a schema,
validation or precision problem.  Reports are deterministic: canonical JSON
with sorted keys and no timestamps.
"""

from __future__ import annotations

import argparse
import os
import random
import sys

from .bockstein import independence_check, oracle_table, pairing_from_lambda, random_phi
from .casefile import canonical_dump, load_case
from .errors import MtregError, SchemaError
from .groupring import GroupData, GroupRingElem, ideal_membership
from .mazurtate import mt_pair_detailed
from .regulator import assemble_regulator, solve_psi, verify_theorem_main
from .structure import PointsStructure

EXIT_OK = 0
EXIT_FAIL = 2
EXIT_ERROR = 3


def _precision(args) -> int | None:
    if getattr(args, "precision", None) is not None:
        return args.precision
    env = os.environ.get("MTREG_PRECISION")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise SchemaError("$.env.MTREG_PRECISION", f"not an integer: {env!r}")
    return None


def _write_report(args, report: dict):
    text = canonical_dump(report)
    if getattr(args, "report", None):
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text


def cmd_verify(args) -> int:
    case = load_case(args.case, _precision(args))
    tol = args.tol if args.tol is not None else case.float_tol
    j_list = args.j_sweep if args.j_sweep else case.j_indices
    psi_matrix = solve_psi(case.table)
    verdicts = []
    for j in j_list:
        components, sign = assemble_regulator(case.heights, psi_matrix, j_idx=j)
        report = verify_theorem_main(
            case.analytic, components, case.structure, j_idx=j, tol=tol
        )
        report["sign"] = sign
        verdicts.append(report)
    overall = "PASS" if all(v["verdict"] == "PASS" for v in verdicts) else "FAIL"
    report = {
        "format": "mtreg-report/1",
        "kind": "verify",
        "case_label": case.label,
        "precision_M": case.precision_m,
        "tolerance": tol,
        "verdicts": verdicts,
        "overall": overall,
    }
    _write_report(args, report)
    for v in verdicts:
        print(f"j_idx={v['j_idx']}: {v['verdict']}  witness={v['witness_coeffs']}")
    print(f"overall: {overall}")
    return EXIT_OK if overall == "PASS" else EXIT_FAIL


def cmd_pair(args) -> int:
    case = load_case(args.case, _precision(args))
    if case.pairing is None:
        raise SchemaError("$.pairing_pipeline", "case file has no pairing section")
    if len(args.point) != 2:
        raise SchemaError("$.args", "exactly two --point labels are required")
    p_label, q_label = args.point
    value, audit = mt_pair_detailed(p_label, q_label, case.pairing)
    report = {
        "format": "mtreg-report/1",
        "kind": "pair",
        "case_label": case.label,
        "P": p_label,
        "Q": q_label,
        "level": value.level,
        "exponent": value.exponent,
        "modulus": value.modulus,
        "audit": audit,
    }
    _write_report(args, report)
    print(f"<{p_label}, {q_label}> = {value.exponent} * (sigma^(p^{value.level}) - 1)  mod {value.modulus}")
    for row in audit:
        print(f"  g=sigma^{row['g']} place={row['place']}: {row['value']}")
    return EXIT_OK


def cmd_oracle(args) -> int:
    p = args.p
    m = tuple(int(x) for x in args.structure.split(","))
    group = GroupData(p, len(m) - 1)
    structure = PointsStructure(group, m)
    rng = random.Random(args.seed)
    precision = _precision(args) or (group.n + 6)
    agreements = 0
    independence_ok = 0
    failures = []
    for trial in range(args.trials):
        phi = random_phi(structure, precision, rng)
        table_snake = oracle_table(phi)
        table_formula = pairing_from_lambda(phi.inverse())
        if table_snake == table_formula:
            agreements += 1
        else:
            failures.append({"trial": trial, "kind": "oracle-mismatch"})
        psi_one = solve_psi(table_formula)
        psi_two = _legal_shift(psi_one, rng)
        ok, _ = independence_check(psi_one, psi_two, precision)
        if ok:
            independence_ok += 1
        else:
            failures.append({"trial": trial, "kind": "independence-failure"})
    report = {
        "format": "mtreg-report/1",
        "kind": "oracle",
        "p": p,
        "structure": list(m),
        "seed": args.seed,
        "trials": args.trials,
        "precision_M": precision,
        "snake_vs_formula_agreements": agreements,
        "independence_successes": independence_ok,
        "failures": failures,
    }
    _write_report(args, report)
    print(
        f"oracle: {agreements}/{args.trials} table agreements, "
        f"{independence_ok}/{args.trials} independence checks"
    )
    return EXIT_OK if not failures else EXIT_FAIL


def _legal_shift(psi_matrix, rng: random.Random):
    """Random re-solution differing by moves inside the defining ideal."""
    structure = psi_matrix.structure
    group = structure.group
    entries = [[e for e in row] for row in psi_matrix.entries]
    pairs = structure.pairs()
    for ri, rp in enumerate(pairs):
        for ci, cp in enumerate(pairs):
            if rp[0] >= group.n or cp[0] >= group.n:
                continue

            def rand_elem():
                return GroupRingElem(group, [rng.randint(-2, 2) for _ in range(group.order)])

            # moves inside the defining ideal which also keep the entry
            # acting through a module map: multiples of sigma^(p^r) - 1
            # vanish in the quotient, and Tr_{J_min(r,s)} multiples are
            # killed by the stabilizer of the dual point
            gen = GroupRingElem.sigma_power(group, group.p ** rp[0]) - GroupRingElem.one(group)
            trace = GroupRingElem.trace_subgroup(group, min(rp[0], cp[0]))
            shift = gen * rand_elem() + trace * rand_elem()
            entries[ri][ci] = entries[ri][ci] + shift
    from .structure import StructuredMatrix

    return StructuredMatrix(structure, entries)


def cmd_validate(args) -> int:
    case = load_case(args.case, _precision(args))
    deep_results = None
    if args.deep:
        deep_results = _deep_checks(case)
    report = {
        "format": "mtreg-report/1",
        "kind": "validate",
        "case_label": case.label,
        "p": case.group.p,
        "n": case.group.n,
        "structure": list(case.structure.m),
        "heights_mode": case.heights.mode,
        "analytic_mode": case.analytic.mode,
        "has_pairing_section": case.pairing is not None,
        "deep": deep_results,
        "valid": deep_results is None or all(deep_results.values()),
    }
    _write_report(args, report)
    if not report["valid"]:
        bad = [k for k, v in deep_results.items() if not v]
        print(f"{args.case}: deep validation failed: {bad}", file=sys.stderr)
        return EXIT_ERROR
    print(f"{args.case}: valid ({case.label})")
    return EXIT_OK


def _deep_checks(case) -> dict:
    """Semantic self-consistency of the pairing section: descent images of
    rational points are fixed vectors, declared generators satisfy the
    local conditions and declared negative controls violate them."""
    from .mazurtate import check_local_conditions

    results = {}
    if case.pairing is None:
        return results
    pairing = case.pairing
    p = pairing.group.p
    dim = len(pairing.selmer.generators)
    for name, vec in sorted(pairing.selmer.point_images.items()):
        moved = [
            sum(pairing.selmer.sigma_matrix[i][k] * vec[k] for k in range(dim)) % p
            for i in range(dim)
        ]
        results[f"point_image_fixed:{name}"] = moved == [v % p for v in vec]
    for idx, gen in enumerate(pairing.selmer.generators):
        results[f"generator_local_conditions:{idx}"] = check_local_conditions(gen, pairing)
    for idx, control in enumerate(pairing.selmer.negative_controls):
        results[f"negative_control_fails:{idx}"] = not check_local_conditions(control, pairing)
    return results


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mtreg",
        description="verify unit criteria for equivariant regulators and "
        "compute height-pairing tables",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser("verify", help="run the unit-criterion verdict on a case file")
    p_verify.add_argument("case")
    p_verify.add_argument("--precision", type=int, default=None)
    p_verify.add_argument("--tol", type=float, default=None)
    p_verify.add_argument("--j-sweep", type=int, nargs="*", default=None)
    p_verify.add_argument("--report", default=None)
    p_verify.set_defaults(func=cmd_verify)

    p_pair = sub.add_parser("pair", help="evaluate the height pairing of two named points")
    p_pair.add_argument("case")
    p_pair.add_argument("--point", action="append", required=True)
    p_pair.add_argument("--precision", type=int, default=None)
    p_pair.add_argument("--report", default=None)
    p_pair.set_defaults(func=cmd_pair)

    p_oracle = sub.add_parser("oracle", help="cross-check the two pairing-table computations")
    p_oracle.add_argument("--structure", required=True, help="multiplicities m0,m1,...")
    p_oracle.add_argument("--p", type=int, default=3)
    p_oracle.add_argument("--seed", type=int, default=0)
    p_oracle.add_argument("--trials", type=int, default=5)
    p_oracle.add_argument("--precision", type=int, default=None)
    p_oracle.add_argument("--report", default=None)
    p_oracle.set_defaults(func=cmd_oracle)

    p_validate = sub.add_parser("validate", help="schema-validate a case file")
    p_validate.add_argument("case")
    p_validate.add_argument("--precision", type=int, default=None)
    p_validate.add_argument("--report", default=None)
    p_validate.add_argument(
        "--deep",
        action="store_true",
        help="also run semantic self-consistency checks on the pairing section",
    )
    p_validate.set_defaults(func=cmd_validate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SchemaError as exc:
        print(f"schema error at {exc.path}: {exc.message}", file=sys.stderr)
        return EXIT_ERROR
    except MtregError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
