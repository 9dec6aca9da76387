"""fixturegen command line: generate case files from a curve-list file."""

from __future__ import annotations

import argparse
import sys

from .backend import BackendSession
from .errors import FixtureGenError


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="fixturegen",
        description="generate mtreg-case/1 files for the verification tool",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p_gen = sub.add_parser("gen", help="generate cases for every label in a curve list")
    p_gen.add_argument("--curves", required=True, help="file with one instance label per line")
    p_gen.add_argument("--out", required=True, help="output directory")
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--sigma-budget", type=int, default=8)
    p_gen.add_argument("--timeout", type=float, default=300.0)
    p_gen.add_argument("--mtreg", default="mtreg", help="path to the verification executable")
    p_gen.set_defaults(func=_cmd_gen)
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FixtureGenError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def _cmd_gen(args) -> int:
    with open(args.curves, "r", encoding="utf-8") as fh:
        labels = [line.strip() for line in fh if line.strip() and not line.startswith("#")]
    session = BackendSession(timeout=args.timeout, mtreg=args.mtreg, seed=args.seed)
    written = []
    for label in labels:
        paths = session.gen_case(label, args.out, sigma_budget=args.sigma_budget)
        for path in paths:
            print(f"wrote {path}")
        written.extend(paths)
    print(f"{len(written)} case files generated")
    return 0


if __name__ == "__main__":
    sys.exit(main())
