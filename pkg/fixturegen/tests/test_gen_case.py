"""End-to-end generation tests, including the acceptance pair:

* the pairing values reported by the verification tool on a generated
  fixture match the algebraic-oracle table derived from the recorded
  matrix, entry for entry (up to the documented global sign), and
* a regenerated known-valid instance verifies PASS.

The verification tool is only reached through its command line and files.
"""

import json
import subprocess
from pathlib import Path

import pytest

from fixturegen.backend import BackendSession, MtregDriver
from fixturegen.errors import BackendTimeout, GenerationError, HypothesisViolation


@pytest.fixture(scope="module")
def bundle(tmp_path_factory):
    out = tmp_path_factory.mktemp("cases")
    session = BackendSession(seed=1)
    paths = session.gen_case("desk-n1-pairing", str(out))
    return [Path(p) for p in paths]


class TestPairingBundle:
    def test_three_files_written(self, bundle):
        assert len(bundle) == 3
        assert all(p.exists() for p in bundle)

    def test_deep_validation_via_cli(self, bundle):
        for path in bundle:
            proc = subprocess.run(
                ["mtreg", "validate", str(path), "--deep"], capture_output=True, text=True
            )
            assert proc.returncode == 0, proc.stderr

    def test_acceptance_pair_matches_oracle_table(self, bundle):
        """cmd_pair output equals the oracle-derived table entry for entry.

        For the degree-p layer the closed oracle formula reads the pairing
        off the recorded matrix Lambda as <Pt_i, P_j> = -aug(Lambda[j][i]),
        and the assembled pairing computes the negative of the height
        pairing, so the reported exponents must equal aug(Lambda[j][i])."""
        driver = MtregDriver()
        main = bundle[0]
        meta = json.loads(main.read_text())["generator_meta"]
        lam = meta["oracle_lambda"]  # lam[j-1][i-1] as integers
        for i, p_name in enumerate(("P1", "P2"), start=1):
            for j, q_name in enumerate(("Q1", "Q2"), start=1):
                code, rep = driver.run(
                    "pair", str(main), "--point", p_name, "--point", q_name, expect=0
                )
                oracle_value = lam[j - 1][i - 1] % 3
                assert rep["exponent"] == oracle_value, (p_name, q_name)

    def test_oracle_command_agrees_on_structure(self, bundle):
        # the snake-vs-formula equivalence backing the oracle table, driven
        # through the command line on the same structure
        proc = subprocess.run(
            ["mtreg", "oracle", "--structure", "2,1", "--seed", "9", "--trials", "5"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert "5/5" in proc.stdout

    def test_acceptance_verify_pass_on_regenerated(self, tmp_path):
        """Regenerating with a fresh seed yields a PASS instance."""
        session = BackendSession(seed=7)
        paths = session.gen_case("desk-n1-pairing", str(tmp_path))
        proc = subprocess.run(
            ["mtreg", "verify", paths[0]], capture_output=True, text=True
        )
        assert proc.returncode == 0, proc.stderr
        assert "overall: PASS" in proc.stdout

    def test_disjoint_sigma_variants_agree(self, bundle):
        tables = []
        for path in bundle[1:]:
            meta = json.loads(path.read_text())["generator_meta"]
            tables.append(meta["pair_table"])
        assert tables[0] == tables[1]

    def test_corrupted_control_fails_deep_validation(self, bundle, tmp_path):
        doc = json.loads(bundle[0].read_text())
        # replace the negative control by the unit class, which satisfies
        # the local conditions and must therefore fail the control check
        deg = len(doc["pairing_pipeline"]["torsion_poly"]) - 1
        unit_poly = [["1", "0", "0"]] + [["0", "0", "0"]] * (deg - 1)
        doc["pairing_pipeline"]["selmer"]["negative_controls"] = [unit_poly]
        bad = tmp_path / "corrupt.json"
        bad.write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n")
        proc = subprocess.run(
            ["mtreg", "validate", str(bad), "--deep"], capture_output=True, text=True
        )
        assert proc.returncode == 3
        assert "negative_control" in proc.stderr


class TestProjectiveInstance:
    def test_generates_and_verifies(self, tmp_path):
        session = BackendSession(seed=3)
        paths = session.gen_case("desk-n1-projective", str(tmp_path))
        assert len(paths) == 1
        proc = subprocess.run(["mtreg", "verify", paths[0]], capture_output=True, text=True)
        assert proc.returncode == 0
        assert "overall: PASS" in proc.stdout


class TestBackendContract:
    def test_hypothesis_violation(self, tmp_path):
        session = BackendSession(seed=0)
        with pytest.raises(HypothesisViolation) as info:
            session.gen_case("desk-bad-torsion", str(tmp_path))
        assert info.value.flag == "a"

    def test_sigma_budget_too_small(self, tmp_path):
        session = BackendSession(seed=0)
        with pytest.raises(GenerationError, match="admissible places"):
            session.gen_case("desk-n1-pairing", str(tmp_path), sigma_budget=0)

    def test_timeout(self, tmp_path):
        session = BackendSession(seed=0, timeout=0.0)
        with pytest.raises(BackendTimeout):
            session.gen_case("desk-n1-projective", str(tmp_path))

    def test_unknown_label(self, tmp_path):
        session = BackendSession(seed=0)
        with pytest.raises(GenerationError, match="unknown instance label"):
            session.gen_case("desk-no-such", str(tmp_path))


class TestCurveListCli:
    def test_gen_from_list(self, tmp_path):
        from fixturegen.cli import main

        curves = tmp_path / "curves.txt"
        curves.write_text("# desk catalogue\ndesk-n1-projective\n")
        out = tmp_path / "out"
        code = main(["gen", "--curves", str(curves), "--out", str(out), "--seed", "2"])
        assert code == 0
        assert list(out.glob("*.json"))

    def test_bad_label_reports_error(self, tmp_path, capsys):
        from fixturegen.cli import main

        curves = tmp_path / "curves.txt"
        curves.write_text("desk-bad-torsion\n")
        code = main(["gen", "--curves", str(curves), "--out", str(tmp_path / "o")])
        assert code == 1
        assert "hypothesis (a)" in capsys.readouterr().err
