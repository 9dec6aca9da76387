"""End-to-end tests of the command-line surface and the case-file schema."""

import json
import random

import pytest

from caseutil import build_roundtrip_case, case_json, pairing_section_json
from pairingutil import build_toy_case
from mtreg.casefile import canonical_dump, load_case, parse_case
from mtreg.cli import main
from mtreg.errors import SchemaError
from mtreg.groupring import GroupData
from mtreg.structure import PointsStructure

G31 = GroupData(3, 1)
G32 = GroupData(3, 2)


@pytest.fixture(scope="module")
def pass_case_path(tmp_path_factory):
    rng = random.Random(100)
    st = PointsStructure(G32, (1, 1, 1))
    raw, table, u, analytic = build_roundtrip_case(st, rng, "exact")
    doc = case_json(st, raw, table, analytic, label="roundtrip-pass", j_list=[1, 2, 4])
    path = tmp_path_factory.mktemp("cases") / "pass.json"
    path.write_text(canonical_dump(doc))
    return str(path), u


@pytest.fixture(scope="module")
def fail_case_path(tmp_path_factory):
    rng = random.Random(200)
    st = PointsStructure(G31, (1, 1))
    raw, table, u, analytic = build_roundtrip_case(st, rng, "exact")
    scaled = {a: v * 3 for a, v in analytic.values.items()}
    from mtreg.regulator import AnalyticInput

    analytic3 = AnalyticInput(G31, scaled, "exact")
    doc = case_json(st, raw, table, analytic3, label="p-scaled")
    path = tmp_path_factory.mktemp("cases") / "fail.json"
    path.write_text(canonical_dump(doc))
    return str(path)


@pytest.fixture(scope="module")
def pair_case_path(tmp_path_factory):
    rng = random.Random(7)
    case, meta = build_toy_case(rng, q_count=1)
    case.selmer.point_images["P1"] = [1, 1, 1]
    st = PointsStructure(GroupData(3, 1), (1, 1))
    raw, table, u, analytic = build_roundtrip_case(st, rng, "exact")
    doc = case_json(st, raw, table, analytic, label="with-pairing")
    doc["pairing_pipeline"] = pairing_section_json(case, meta)
    path = tmp_path_factory.mktemp("cases") / "pair.json"
    path.write_text(canonical_dump(doc))
    return str(path), meta


class TestVerifyCommand:
    def test_pass_exit_zero(self, pass_case_path, tmp_path, capsys):
        path, u = pass_case_path
        report_path = tmp_path / "report.json"
        code = main(["verify", path, "--report", str(report_path)])
        assert code == 0
        out = capsys.readouterr().out
        assert "overall: PASS" in out
        report = json.loads(report_path.read_text())
        assert report["overall"] == "PASS"
        assert len(report["verdicts"]) == 3
        for v in report["verdicts"]:
            assert v["witness_coeffs"] == [str(c) for c in u.coeffs]

    def test_fail_exit_two(self, fail_case_path, capsys):
        code = main(["verify", fail_case_path])
        assert code == 2
        assert "FAIL" in capsys.readouterr().out

    def test_truncated_file_exit_three(self, tmp_path, capsys):
        bad = tmp_path / "broken.json"
        bad.write_text('{"format": "mtreg-case/1", "header": {')
        assert main(["verify", str(bad)]) == 3
        assert "schema error" in capsys.readouterr().err

    def test_missing_section_path_in_diagnostic(self, tmp_path, capsys):
        bad = tmp_path / "incomplete.json"
        bad.write_text(json.dumps({"format": "mtreg-case/1", "header": {"p": 3}}))
        assert main(["verify", str(bad)]) == 3
        assert "$.header" in capsys.readouterr().err

    def test_report_deterministic(self, pass_case_path, tmp_path):
        path, _ = pass_case_path
        r1, r2 = tmp_path / "r1.json", tmp_path / "r2.json"
        assert main(["verify", path, "--report", str(r1)]) == 0
        assert main(["verify", path, "--report", str(r2)]) == 0
        assert r1.read_bytes() == r2.read_bytes()


class TestValidateCommand:
    def test_valid_case(self, pass_case_path, capsys):
        path, _ = pass_case_path
        assert main(["validate", path]) == 0
        assert "valid" in capsys.readouterr().out

    def test_schema_roundtrip_idempotent(self, pass_case_path):
        path, _ = pass_case_path
        with open(path) as fh:
            doc = json.load(fh)
        case = parse_case(doc)
        assert canonical_dump(case.to_json()) == canonical_dump(doc)

    def test_bad_hypotheses_rejected(self, pass_case_path, tmp_path, capsys):
        path, _ = pass_case_path
        with open(path) as fh:
            doc = json.load(fh)
        doc["header"]["hypotheses_asserted"] = ["a", "b"]
        bad = tmp_path / "bad.json"
        bad.write_text(canonical_dump(doc))
        assert main(["validate", str(bad)]) == 3
        assert "hypotheses" in capsys.readouterr().err

    def test_wrong_level_rejected(self, pass_case_path, tmp_path, capsys):
        path, _ = pass_case_path
        with open(path) as fh:
            doc = json.load(fh)
        doc["mt_table"]["entries"][0]["level"] = 9
        bad = tmp_path / "bad_level.json"
        bad.write_text(canonical_dump(doc))
        assert main(["validate", str(bad)]) == 3
        assert "level" in capsys.readouterr().err


class TestPairCommand:
    def test_pair_matches_library(self, pair_case_path, tmp_path, capsys):
        path, meta = pair_case_path
        report_path = tmp_path / "pair.json"
        code = main(
            ["pair", path, "--point", "P1", "--point", "Q1", "--report", str(report_path)]
        )
        assert code == 0
        report = json.loads(report_path.read_text())
        beta = meta["q_names"][0][1]
        assert report["exponent"] == beta % 3
        assert len(report["audit"]) == 6  # 3 group elements x 2 places

    def test_missing_point_data(self, pair_case_path, capsys):
        path, _ = pair_case_path
        assert main(["pair", path, "--point", "P1", "--point", "Qmissing"]) == 3
        assert "InconsistentPlaces" in capsys.readouterr().err

    def test_pair_without_section(self, pass_case_path, capsys):
        path, _ = pass_case_path
        assert main(["pair", path, "--point", "P1", "--point", "Q1"]) == 3


class TestOracleCommand:
    def test_small_structure(self, capsys):
        code = main(["oracle", "--structure", "1,0", "--seed", "1", "--trials", "5"])
        assert code == 0
        assert "5/5" in capsys.readouterr().out

    def test_projective_structure_trivial(self, capsys):
        code = main(["oracle", "--structure", "0,2", "--seed", "1", "--trials", "3"])
        assert code == 0

    def test_depth_two(self, capsys):
        code = main(["oracle", "--structure", "1,1,1", "--seed", "3", "--trials", "3"])
        assert code == 0


class TestPrecisionOverride:
    def test_env_variable(self, pass_case_path, monkeypatch, capsys):
        path, _ = pass_case_path
        monkeypatch.setenv("MTREG_PRECISION", "9")
        assert main(["validate", path]) == 0

    def test_bad_env_value(self, pass_case_path, monkeypatch, capsys):
        path, _ = pass_case_path
        monkeypatch.setenv("MTREG_PRECISION", "not-a-number")
        assert main(["validate", path]) == 3
