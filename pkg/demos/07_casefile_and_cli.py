"""Writing an mtreg-case/1 file and driving the command-line interface.

Builds a small degree-3 instance, serializes it, and runs the validate and
verify subcommands in-process; the same file works with the installed
`mtreg` executable.
"""

import json
import random
import tempfile
from fractions import Fraction
from pathlib import Path

from mtreg.bockstein import pairing_from_lambda, random_phi
from mtreg.casefile import canonical_dump
from mtreg.cli import main
from mtreg.groupring import Character, GroupData, GroupRingElem, apply_character, is_unit_zp
from mtreg.regulator import HeightMatrix, assemble_regulator, solve_psi
from mtreg.structure import PointsStructure

rng = random.Random(5)
group = GroupData(3, 1)
structure = PointsStructure(group, (1, 1))


def rat(q):
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


raw = [
    [[Fraction(rng.randint(-20, 20), rng.randint(1, 5)) for _ in range(3)] for _ in range(2)]
    for _ in range(2)
]
heights = HeightMatrix.from_raw(structure, raw, mode="exact")
table = pairing_from_lambda(random_phi(structure, 7, rng).inverse())
components, _ = assemble_regulator(heights, solve_psi(table))
while True:
    u = GroupRingElem(group, [rng.randint(-4, 4) for _ in range(3)])
    if is_unit_zp(u):
        break

doc = {
    "format": "mtreg-case/1",
    "header": {
        "p": 3,
        "n": 1,
        "label": "demo-case",
        "hypotheses_asserted": ["a", "b", "c", "d", "e", "f", "g", "h", "i"],
        "precision": {"M": 7, "float_tol": 1e-8},
        "j_idx": [1, 2],
    },
    "structure": {"m": [1, 1]},
    "heights": {
        "mode": "exact",
        "values": [[[rat(v) for v in cell] for cell in row] for row in raw],
        "err": 0.0,
    },
    "mt_table": {
        "entries": [
            {
                "r": r, "j": j, "s": s, "i": i, "level": max(r, s),
                "exponents": [cls.exponent for cls in values],
            }
            for ((r, j), (s, i)), values in sorted(table.entries.items())
        ]
    },
    "analytic": {
        "mode": "exact",
        "galois_consistent": True,
        "values": [
            {
                "a": a,
                "coeffs": [
                    rat(c)
                    for c in (apply_character(u, Character(group, a)) * components[a]).coeffs
                ],
            }
            for a in range(3)
        ],
    },
}

with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "demo_case.json"
    path.write_text(canonical_dump(doc))
    print("wrote", path, f"({path.stat().st_size} bytes)")
    print("\n$ mtreg validate demo_case.json")
    main(["validate", str(path)])
    print("\n$ mtreg verify demo_case.json --report report.json")
    report_path = Path(tmp) / "report.json"
    code = main(["verify", str(path), "--report", str(report_path)])
    print("exit code:", code)
    report = json.loads(report_path.read_text())
    print("hidden unit:", list(u.coeffs), "-> recovered:",
          report["verdicts"][0]["witness_coeffs"])
    print("\n$ mtreg oracle --structure 1,1 --trials 3")
    main(["oracle", "--structure", "1,1", "--trials", "3"])
