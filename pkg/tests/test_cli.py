import json
import subprocess
import sys

import numpy as np
import pytest

from ncselftest import schemas
from ncselftest.cli import main
from ncselftest.realization import ideal_realization
from ncselftest.robustness import (JordanBlock, JordanBlockSpec, _embed, deficit_statistics,
                                   ghz_minus, random_jordan_spec)


def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_bounds_n3(capsys):
    code, out, _ = run_cli(capsys, "bounds", "--n", "3")
    assert code == 0
    assert json.loads(out) == {"classical": 2, "quantum": 4}
    schemas.validate(json.loads(out), schemas.BOUNDS, "bounds")


def test_bounds_brute_force(capsys):
    code, out, _ = run_cli(capsys, "bounds", "--n", "4", "--brute-force", "--jobs", "2")
    assert code == 0 and json.loads(out) == {"classical": 8, "quantum": 16}


def test_evaluate_ideal(capsys):
    code, out, _ = run_cli(capsys, "evaluate", "--n", "4", "--realization", "ideal")
    data = json.loads(out)
    schemas.validate(data, schemas.EVALUATION, "evaluation")
    assert code == 0 and data["value"] == 16
    code, out, _ = run_cli(capsys, "evaluate", "--n", "4", "--realization", "ideal",
                           "--format", "text")
    assert out.strip() == "16"


def test_evaluate_from_file(capsys, tmp_path):
    path = tmp_path / "r.json"
    path.write_text(json.dumps(ideal_realization(3, "dense").to_json()))
    code, out, _ = run_cli(capsys, "evaluate", "--realization", str(path))
    assert code == 0 and json.loads(out)["value"] == pytest.approx(4, abs=1e-9)


def test_build_json_and_dot(capsys):
    code, out, _ = run_cli(capsys, "build", "--n", "5")
    schemas.validate(json.loads(out), schemas.INEQUALITY, "inequality")
    assert code == 0 and len(json.loads(out)["terms"]) == 15
    code, out, _ = run_cli(capsys, "build", "--n", "3", "--dot")
    assert out.startswith("graph") and "color=blue" in out


def test_export_hypergraph_json(capsys):
    code, out, _ = run_cli(capsys, "export-hypergraph", "--n", "4", "--format", "json")
    schemas.validate(json.loads(out), schemas.HYPERGRAPH, "hypergraph")
    assert code == 0


def test_check_alt3(capsys):
    code, out, _ = run_cli(capsys, "check", "--realization", "alt3")
    data = json.loads(out)
    schemas.validate(data["compatibility"], schemas.COMPATIBILITY, "compatibility")
    assert code == 0 and data["canonical_form"]["passed"]


def test_check_incompatible_exits_2(capsys, tmp_path):
    r = ideal_realization(3)
    data = r.to_json()
    data["observables"]["B2"] = "ZII"
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data))
    code, out, _ = run_cli(capsys, "check", "--realization", str(path))
    assert code == 2 and not json.loads(out)["compatibility"]["admissible"]


def test_certify_stats(capsys, tmp_path):
    path = tmp_path / "s.json"
    path.write_text(json.dumps(deficit_statistics(3, 0.001).to_json()))
    code, out, _ = run_cli(capsys, "certify", "--n", "3", "--stats", str(path))
    data = json.loads(out)
    schemas.validate(data, schemas.REPORT, "report")
    assert code == 0
    assert data["fid_state_bound"] == 0.975 and data["fid_B_bound"] == 0.996
    code, out, _ = run_cli(capsys, "certify", "--stats", str(path), "--format", "text")
    assert "0.975" in out and "0.996" in out


def test_certify_jordan_violation_exits_2(capsys, tmp_path):
    n, t = 4, 0.2
    rot = np.diag([np.exp(0.25j * t), np.exp(-0.25j * t)])
    amp = _embed(rot, 1, n) @ ghz_minus(n)
    spec = JordanBlockSpec((JordanBlock(1.0, (t, 0.0, 0.0, 0.0), amp),))
    path = tmp_path / "j.json"
    path.write_text(json.dumps(spec.to_json()))
    code, out, _ = run_cli(capsys, "certify", "--jordan", str(path))
    assert code == 2 and json.loads(out)["violations"]


def test_validate_robustness(capsys):
    code, out, _ = run_cli(capsys, "validate-robustness", "--n", "3", "--trials", "200",
                           "--seed", "7")
    data = json.loads(out)
    schemas.validate(data, schemas.VALIDATION, "validation")
    assert code == 0 and data["violating_trials"] == 0


def test_determinism_across_jobs(capsys):
    outs = []
    for jobs in ("1", "3"):
        outs.append(run_cli(capsys, "validate-robustness", "--trials", "30", "--seed", "2",
                            "--jobs", jobs)[1])
    assert outs[0] == outs[1]


def test_output_file(capsys, tmp_path):
    path = tmp_path / "b.json"
    code, out, _ = run_cli(capsys, "bounds", "--n", "5", "--output", str(path))
    assert code == 0 and out == ""
    assert json.loads(path.read_text()) == {"classical": 20, "quantum": 40}


def test_json_round_trip_bit_exact(capsys, tmp_path):
    spec = random_jordan_spec(np.random.default_rng(1), 3)
    path = tmp_path / "j.json"
    path.write_text(json.dumps(spec.to_json()))
    code, out, _ = run_cli(capsys, "certify", "--jordan", str(path))
    data = json.loads(out)
    assert json.loads(json.dumps(data)) == data
    assert JordanBlockSpec.from_json(json.loads(path.read_text())).to_json() == spec.to_json()


@pytest.mark.parametrize("argv, needle", [
    (["evaluate", "--realization", "/no/such/file.json"], "cannot read"),
    (["certify", "--n", "3"], "exactly one"),
    (["evaluate", "--n", "4", "--realization", "alt3"], "n = 3"),
    (["evaluate", "--n", "13", "--realization", "ideal", "--backend", "dense"], "refuses"),
    (["bounds", "--n", "16", "--brute-force"], "brute force"),
    (["validate-robustness", "--trials", "0"], "--trials"),
])
def test_usage_errors_exit_1(capsys, argv, needle):
    code, _, err = run_cli(capsys, *argv)
    assert code == 1 and needle in err


def test_schema_error_names_field(capsys, tmp_path):
    path = tmp_path / "s.json"
    path.write_text(json.dumps({"n": 3, "values": [{"labels": ["A1", "B2", "B3"], "value": 2}]}))
    code, _, err = run_cli(capsys, "certify", "--stats", str(path))
    assert code == 1 and "values.0.value" in err
    path.write_text("{not json")
    code, _, err = run_cli(capsys, "certify", "--stats", str(path))
    assert code == 1 and "not valid JSON" in err


def test_realization_json_schema():
    for backend in ("symbolic", "dense"):
        schemas.validate(ideal_realization(3, backend).to_json(), schemas.REALIZATION, "r")


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "ncselftest", "bounds", "--n", "3"],
                         capture_output=True, text=True, check=True).stdout
    assert json.loads(out) == {"classical": 2, "quantum": 4}
