import csv
import io
import json

import numpy as np
import pytest

from gravwitness.cli import fmt, main


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_two_qubit_quarter_pi(capsys):
    code, out, _ = run(["two-qubit", "--theta", repr(np.pi / 4), "--workers", "1"], capsys)
    assert code == 0
    (r,) = rows(out)
    assert float(r["w_analytical"]) == pytest.approx(-2 / 3, abs=1e-9)
    assert r["certificate_valid"] == "true"


def test_two_qubit_grid_consistency(capsys):
    code, out, _ = run(["two-qubit", "--theta-steps", "21", "--workers", "1"], capsys)
    assert code == 0
    table = rows(out)
    assert len(table) == 21
    assert max(abs(float(r["w_analytical"]) - float(r["closed_form_w"])) for r in table) < 1e-9


def test_empty_grid_is_usage_error(capsys):
    code, _, err = run(["two-qubit", "--theta-steps", "0"], capsys)
    assert code == 1 and "empty" in err


def test_unknown_command_is_usage_error(capsys):
    assert run(["nope"], capsys)[0] == 1
    assert run(["jc", "--g", "x"], capsys)[0] == 1


def test_sdp_sweep_rows(capsys):
    code, out, _ = run(["sdp-sweep", "--theta", "0.7", repr(np.pi / 4), "--workers", "1"], capsys)
    assert code == 0
    table = rows(out)
    assert [float(r["theta"]) for r in table] == [0.7, np.pi / 4]
    assert all(r["status"] == "optimal" and float(r["primal_res"]) < 1e-7 for r in table)
    assert float(table[1]["w_star"]) < float(table[0]["w_star"]) < 0


def test_jc_rows(capsys):
    code, out, _ = run(["jc", "--g", "0", "0.5", "--delta", "1", "--quadratic", "--workers", "1"], capsys)
    assert code == 0
    table = rows(out)
    assert float(table[0]["w_measured"]) == pytest.approx(0.0, abs=1e-12)
    assert float(table[1]["w_measured"]) == pytest.approx(-0.29289321881345, abs=1e-9)
    assert float(table[1]["w_quadratic"]) == pytest.approx(-0.5)


def test_jc_degenerate_point_rejected(capsys):
    code, out, _ = run(["jc", "--g", "0", "--delta", "0", "1", "--workers", "1"], capsys)
    table = rows(out)
    assert code == 1 and table[0]["w_measured"] == "nan" and table[1]["w_measured"] == "0"


def test_tightened_tolerance_is_contract_violation(capsys):
    code, _, err = run(["jc", "--g", "0.3", "--delta", "1", "--tol", "1e-30", "--workers", "1"], capsys)
    assert code == 2 and "contract" in err


def test_estimate_reports(capsys):
    code, out, _ = run(["estimate"], capsys)
    assert code == 0 and 2.9 <= json.loads(out)["tau_min"] <= 3.2
    code, out, _ = run(["estimate", "--setup", "oscillator", "--target", "1e-6", "--tau", "100"], capsys)
    rep = json.loads(out)
    assert code == 0 and 5e-15 <= rep["required_mass"] <= 2e-14
    assert rep["inputs"]["gap_l"] == 100e-6


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"setup": "oscillator", "tau": 50.0, "oscillator": {"frequency": 20.0}}))
    code, out, _ = run(["estimate", "--config", str(cfg), "--tau", "100"], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["inputs"]["tau"] == 100.0 and rep["inputs"]["frequency"] == 20.0


def test_malformed_config(tmp_path, capsys):
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"setup": "oscillator", "oscillator": {"M": -1, "colour": "red"}}))
    code, _, err = run(["estimate", "--config", str(cfg)], capsys)
    assert code == 1 and "/oscillator/M" in err and "colour" in err
    cfg.write_text("{not json")
    assert run(["estimate", "--config", str(cfg)], capsys)[0] == 1
    assert run(["estimate", "--config", str(tmp_path / "missing.json")], capsys)[0] == 1


def test_invalid_geometry(tmp_path, capsys):
    cfg = tmp_path / "g.json"
    cfg.write_text(json.dumps({"setup": "oscillator", "oscillator": {"gap_l": 4e-4, "gap_r": 1e-4}}))
    code, _, err = run(["estimate", "--config", str(cfg)], capsys)
    assert code == 1 and "gap_l" in err


def test_locc_check_pass_and_deterministic(capsys):
    code, out1, _ = run(["locc-check", "--seed", "42", "--count", "50"], capsys)
    _, out2, _ = run(["locc-check", "--seed", "42", "--count", "50"], capsys)
    assert code == 0 and out1 == out2
    rep = json.loads(out1)
    assert rep["passed"] and rep["instances"] == 50 and rep["min_witness_analytical"] >= -1e-7


def test_locc_check_count_validation(capsys):
    assert run(["locc-check", "--count", "0"], capsys)[0] == 1


def test_out_file(tmp_path, capsys):
    out = tmp_path / "t.csv"
    assert run(["two-qubit", "--theta", "0.1", "--out", str(out), "--workers", "1"], capsys)[0] == 0
    assert rows(out.read_text())[0]["theta"] == "0.10000000000000001"


def test_full_precision_formatting():
    for x in (np.pi, 1 / 3, -2 / 3, 1e-300, 6.02214076e23):
        assert float(fmt(x)) == x
    assert fmt(-0.0) == "0" and fmt(True) == "true"


def test_worker_pool_preserves_order(capsys):
    code, out, _ = run(["two-qubit", "--theta", "0.5", "0.1", "0.3", "--workers", "2"], capsys)
    assert code == 0 and [float(r["theta"]) for r in rows(out)] == [0.5, 0.1, 0.3]
