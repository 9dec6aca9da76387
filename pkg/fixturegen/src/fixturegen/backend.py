"""Backend driver interface and the built-in desk backend.

``BackendSession`` is the handle behind which a computer-algebra process
would sit in a production pipeline (executable path, timeout, cache); the
desk backend implements the same surface with self-consistent toy
instances computed in-process, so the generator runs without external
software.  The verification tool is only ever reached through its command
line and its case-file format.
"""

from __future__ import annotations

import json
import random
import subprocess
import tempfile
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional

from . import builder, casewriter, cubicfield
from .errors import BackendTimeout, GenerationError, HypothesisViolation

# instance catalogue of the desk backend; torsion_order is the order of the
# rational torsion subgroup used for the hypothesis (a) check
CATALOGUE = {
    "desk-n1-pairing": {"kind": "pairing", "m": (2, 1), "torsion_order": 1},
    "desk-n1-projective": {"kind": "projective", "m": (0, 2), "torsion_order": 2},
    "desk-bad-torsion": {"kind": "projective", "m": (0, 1), "torsion_order": 3},
}


class MtregDriver:
    """Runs the verification tool through its command line."""

    def __init__(self, executable: str = "mtreg"):
        self.executable = executable

    def run(self, *args: str, expect: Optional[int] = None) -> tuple[int, dict]:
        with tempfile.TemporaryDirectory() as tmp:
            report_path = Path(tmp) / "report.json"
            cmd = [self.executable, *args, "--report", str(report_path)]
            proc = subprocess.run(cmd, capture_output=True, text=True)
            report = {}
            if report_path.exists():
                report = json.loads(report_path.read_text())
            if expect is not None and proc.returncode != expect:
                raise GenerationError(
                    f"{' '.join(cmd)} exited {proc.returncode}: {proc.stderr.strip()}"
                )
            return proc.returncode, report


@dataclass
class BackendSession:
    """Generation session: backend handle plus output and cache locations."""

    executable: Optional[str] = None
    timeout: float = 300.0
    cache_dir: Optional[str] = None
    mtreg: str = "mtreg"
    seed: int = 0
    _started: float = field(default_factory=time.time, repr=False)

    def _check_time(self):
        if time.time() - self._started > self.timeout:
            raise BackendTimeout(f"time budget of {self.timeout}s exhausted")

    def gen_case(self, label: str, out_dir: str, sigma_budget: int = 8) -> list[str]:
        """Generate the case bundle for one catalogue label; returns the
        list of written file paths.  Every emitted file passes deep
        validation and the expected verify verdict through the CLI."""
        self._check_time()
        spec = CATALOGUE.get(label)
        if spec is None:
            raise GenerationError(f"unknown instance label {label!r}")
        if spec["torsion_order"] % 3 == 0:
            raise HypothesisViolation("a", f"rational torsion of order {spec['torsion_order']}")
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        if spec["kind"] == "projective":
            paths = [self._gen_projective(label, spec["m"], out)]
        else:
            if sigma_budget < 8:
                raise GenerationError(
                    "pairing instances need at least eight admissible places; "
                    f"budget {sigma_budget} is too small"
                )
            paths = self._gen_pairing(label, spec["m"], out)
        driver = MtregDriver(self.mtreg)
        for path in paths:
            self._check_time()
            driver.run("validate", path, "--deep", expect=0)
        return paths

    # -- projective instances -------------------------------------------------

    def _gen_projective(self, label: str, m, out: Path) -> str:
        rng = random.Random((self.seed, label).__repr__())
        heights, psi_entries, unit, analytic = builder.synthesize_verification(rng, m, {})
        doc = casewriter.verification_sections(m, heights, analytic, {}, label, j_idx=[1, 2])
        doc["generator_meta"] = {"label": label, "seed": self.seed, "unit": unit,
                                 "expected_verdict": "PASS"}
        path = out / f"{label}.json"
        path.write_text(casewriter.dump(doc))
        driver = MtregDriver(self.mtreg)
        code, report = driver.run("verify", str(path), expect=0)
        if report["overall"] != "PASS":
            raise GenerationError("projective instance did not verify")
        return str(path)

    # -- pairing instances ----------------------------------------------------

    def _gen_pairing(self, label: str, m, out: Path) -> list[str]:
        driver = MtregDriver(self.mtreg)
        for attempt in range(8):
            self._check_time()
            rng = random.Random((self.seed, label, attempt).__repr__())
            try:
                return self._try_pairing(label, m, out, rng, driver)
            except GenerationError:
                if attempt == 7:
                    raise
        raise GenerationError("unreachable")

    def _try_pairing(self, label, m, out: Path, rng, driver) -> list[str]:
        specs = builder.SIGMA_PLACES_HALF1 + builder.SIGMA_PLACES_HALF2 + builder.V_PLACES
        lam, places = builder.choose_lambda(specs)
        sigma_places = places[:8]
        v_places = places[8:]
        torsion_poly = builder.torsion_polynomial(places)

        generators = []
        for pattern in builder.ORBIT_PATTERNS:
            h = builder.build_orbit_generator(rng, sigma_places, v_places, pattern)
            generators.extend(
                [h, casewriter.conjugate_poly(h, 1), casewriter.conjugate_poly(h, 2)]
            )
        point_images = {
            "P1": [1, 1, 1, 0, 0, 0],
            "P2": [0, 0, 0, 1, 1, 1],
        }
        # target descent classes of the named points, per place: opposite
        # classes inside each reciprocity pair, matching across the halves
        q_targets = {
            "Q1": [1, -1, 0, 0, 1, -1, 0, 0],
            "Q2": [0, 0, 1, -1, 0, 0, 1, -1],
        }
        point_reductions = {}
        for name, targets in q_targets.items():
            pts = builder.choose_point_reductions(rng, sigma_places, targets)
            point_reductions[name] = {
                f"ell{pl.ell}": pt for pl, pt in zip(sigma_places, pts)
            }
        controls = [self._negative_control(v_places[0])]

        bundle = []
        variants = [
            ("", sigma_places),
            ("-sigma-a", sigma_places[:4]),
            ("-sigma-b", sigma_places[4:]),
        ]
        tables = {}
        written = []
        for suffix, sub_places in variants:
            case_label = label + suffix
            draft = self._assemble(
                case_label, m, lam, torsion_poly, generators, point_images, controls,
                sub_places, v_places, point_reductions,
                heights=None, analytic=None, mt_exponents=None, rng=rng,
            )
            draft_path = out / f"{case_label}.draft.json"
            draft_path.write_text(casewriter.dump(draft))
            table = {}
            for i, p_name in enumerate(("P1", "P2"), start=1):
                for j, q_name in enumerate(("Q1", "Q2"), start=1):
                    code, rep = driver.run(
                        "pair", str(draft_path), "--point", p_name, "--point", q_name
                    )
                    if code != 0:
                        raise GenerationError(f"pair failed on {case_label}: retrying")
                    table[(i, j)] = rep["exponent"] % 3
            draft_path.unlink()
            tables[suffix] = table
        if tables["-sigma-a"] != tables["-sigma-b"]:
            raise GenerationError("disjoint admissible halves disagree; retrying")
        main_table = tables[""]
        det = (
            main_table[(1, 1)] * main_table[(2, 2)]
            - main_table[(1, 2)] * main_table[(2, 1)]
        ) % 3
        if det == 0:
            raise GenerationError("pairing matrix is singular mod 3; retrying")

        for suffix, sub_places in variants:
            case_label = label + suffix
            table = tables[suffix]
            mt_exponents = {
                ((0, j), (0, i)): (-table[(i, j)]) % 3
                for i in (1, 2)
                for j in (1, 2)
            }
            heights, psi_entries, unit, analytic = builder.synthesize_verification(
                rng, m, mt_exponents
            )
            doc = self._assemble(
                case_label, m, lam, torsion_poly, generators, point_images, controls,
                sub_places, v_places, point_reductions,
                heights=heights, analytic=analytic, mt_exponents=mt_exponents, rng=rng,
            )
            doc["generator_meta"] = {
                "label": case_label,
                "seed": self.seed,
                "unit": unit,
                "expected_verdict": "PASS",
                "pair_table": {f"{i},{j}": table[(i, j)] for i in (1, 2) for j in (1, 2)},
                "oracle_lambda": [[table[(i, j)] for i in (1, 2)] for j in (1, 2)],
                "disjoint_sigma_variants": [label + "-sigma-a", label + "-sigma-b"],
            }
            path = out / f"{case_label}.json"
            path.write_text(casewriter.dump(doc))
            code, rep = driver.run("verify", str(path), expect=0)
            if rep["overall"] != "PASS":
                raise GenerationError(f"{case_label} did not verify; retrying")
            witness = rep["verdicts"][0]["witness_coeffs"]
            if witness != [str(c) for c in unit]:
                raise GenerationError("verify recovered an unexpected witness")
            written.append(str(path))
        return written

    def _assemble(self, case_label, m, lam, torsion_poly, generators, point_images,
                  controls, sigma_places, v_places, point_reductions,
                  heights, analytic, mt_exponents, rng):
        if heights is None:
            order = 3
            n_points = sum(m)
            heights = [
                [[rng.uniform(-2.0, 2.0) for _ in range(order)] for _ in range(n_points)]
                for _ in range(n_points)
            ]
            analytic = {a: complex(1.0, 0.0) for a in range(order)}
            mt_exponents = {
                ((0, j), (0, i)): 0 for i in range(1, m[0] + 1) for j in range(1, m[0] + 1)
            }
        doc = casewriter.verification_sections(
            m, heights, analytic, mt_exponents, case_label, j_idx=[1, 2]
        )
        doc["pairing_pipeline"] = casewriter.pairing_section(
            lam, torsion_poly, generators, point_images, controls,
            sigma_places, v_places, point_reductions,
        )
        return doc

    def _negative_control(self, v_place):
        """A class vanishing at the validation place's S root image."""
        lift = v_place.w_s
        coeffs = [
            (Fraction(-lift), Fraction(0), Fraction(0)),
            (Fraction(1), Fraction(0), Fraction(0)),
        ] + [(Fraction(0),) * 3] * 6
        return coeffs
