"""End-to-end CLI behavior: exit codes, reports, determinism."""

import json
import math

import pytest

from smallfock.cli import EXIT_NUMERIC, EXIT_OK, EXIT_VALIDATION, main
from smallfock.core import Side, TailedSpec
from smallfock.schema import spec_to_json

from conftest import gamma_one, make_spec


@pytest.fixture
def spec_file(tmp_path):
    path = tmp_path / "spec.json"
    path.write_text(json.dumps(spec_to_json(gamma_one())))
    return path


def test_analyze_yes(spec_file, tmp_path):
    out = tmp_path / "out"
    assert main(["analyze", "--spec", str(spec_file), "--out", str(out)]) == EXIT_OK
    report = json.loads((out / "verdict.json").read_text())
    assert report["verdict"]["decision"] == "yes"
    assert report["provenance"]["tool_version"]
    assert len(report["provenance"]["spec_sha256"]) == 64


def test_analyze_no_is_still_success(tmp_path):
    spec = make_spec(TailedSpec.const(0.5), TailedSpec.const(0.0))
    path = tmp_path / "spec.json"
    path.write_text(json.dumps(spec_to_json(spec)))
    out = tmp_path / "out"
    assert main(["analyze", "--spec", str(path), "--out", str(out)]) == EXIT_OK
    report = json.loads((out / "verdict.json").read_text())
    assert report["verdict"]["decision"] == "no"
    assert report["verdict"]["failures"] == ["WINDOW"]


def test_malformed_spec_exits_2(tmp_path, capsys):
    path = tmp_path / "bad.json"
    payload = spec_to_json(gamma_one())
    del payload["alpha"]
    path.write_text(json.dumps(payload))
    assert main(["analyze", "--spec", str(path),
                 "--out", str(tmp_path / "out")]) == EXIT_VALIDATION
    err = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
    assert "/alpha" in err["error"]


def test_missing_spec_flag_exits_2(tmp_path):
    assert main(["analyze", "--out", str(tmp_path / "out")]) == EXIT_VALIDATION


def test_reports_are_append_only(spec_file, tmp_path):
    out = tmp_path / "out"
    args = ["analyze", "--spec", str(spec_file), "--out", str(out)]
    assert main(args) == EXIT_OK
    assert main(args) == EXIT_VALIDATION  # refuses to overwrite
    assert main(args + ["--force"]) == EXIT_OK


def test_product_reports_are_deterministic(spec_file, tmp_path):
    outs = []
    for name in ("a", "b"):
        out = tmp_path / name
        assert main(["product", "--spec", str(spec_file), "--out", str(out),
                     "--samples", "20", "--seed", "7"]) == EXIT_OK
        outs.append((out / "product.csv").read_bytes())
    assert outs[0] == outs[1]


def test_product_seed_changes_samples(spec_file, tmp_path):
    a = tmp_path / "a"
    b = tmp_path / "b"
    main(["product", "--spec", str(spec_file), "--out", str(a),
          "--samples", "5", "--seed", "1"])
    main(["product", "--spec", str(spec_file), "--out", str(b),
          "--samples", "5", "--seed", "2"])
    assert (a / "product.csv").read_bytes() != (b / "product.csv").read_bytes()


def test_tmatrix_report(spec_file, tmp_path):
    out = tmp_path / "out"
    assert main(["tmatrix", "--spec", str(spec_file), "--out", str(out),
                 "--size", "24"]) == EXIT_OK
    report = json.loads((out / "tmatrix.json").read_text())
    assert report["slopes"]["upper"] < 0 and report["slopes"]["lower"] < 0
    assert report["verdict_cross_check"]["consistent"] is True
    header = (out / "tmatrix.csv").read_text().splitlines()[0]
    assert header == "m,k,log_abs,phase,predicted_log"


def test_normcheck(tmp_path):
    out = tmp_path / "out"
    assert main(["normcheck", "--out", str(out)]) == EXIT_OK
    report = json.loads((out / "normcheck.json").read_text())
    assert report["worst_rel_error"] <= 1e-6


def test_interpolate_round_trip(tmp_path):
    payload = {
        "spec": spec_to_json(gamma_one()),
        "data": [{"k": 0, "re": 1.0, "im": 0.0},
                 {"k": 2, "re": -0.5, "im": 0.25}],
    }
    path = tmp_path / "job.json"
    path.write_text(json.dumps(payload))
    out = tmp_path / "out"
    assert main(["interpolate", "--spec", str(path), "--out", str(out),
                 "--samples", "5", "--rel-tol", "1e-6"]) == EXIT_OK
    report = json.loads((out / "interpolate.json").read_text())
    assert report["warned_not_cis"] is False
    worst = max(r["abs"] for r in report["residuals"])
    assert worst <= 1e-8


def test_interpolate_rejects_bad_data(tmp_path):
    payload = {"spec": spec_to_json(gamma_one()), "data": [{"k": 0}]}
    path = tmp_path / "job.json"
    path.write_text(json.dumps(payload))
    assert main(["interpolate", "--spec", str(path),
                 "--out", str(tmp_path / "out")]) == EXIT_VALIDATION
