import json
import subprocess
import sys

import pytest

from fksix.reports import fmt_number, validate_report


def run_cli(*args):
    return subprocess.run(
        [sys.executable, "-m", "fksix.cli", *args],
        capture_output=True,
        text=True,
    )


def test_verify_coupling_exit_zero(tmp_path):
    out = tmp_path / "report.json"
    res = run_cli(
        "verify-coupling", "--domain", "diamond:1", "--q", "symbolic",
        "--backend", "symbolic", "--out", str(out),
    )
    assert res.returncode == 0, res.stderr
    report = json.loads(out.read_text())
    validate_report(report)
    assert all(c["passed"] for c in report["checks"])
    assert "wall time" in res.stderr  # timing never lands in the report file


def test_holley_command(tmp_path):
    out = tmp_path / "holley.json"
    res = run_cli(
        "holley", "--q", "9", "--p", "0.75", "--qb", "1", "--qb2", "9",
        "--domain", "diamond:1", "--out", str(out),
    )
    assert res.returncode == 0, res.stderr
    validate_report(json.loads(out.read_text()))


def test_drift_reports_are_byte_identical(tmp_path):
    args = (
        "drift", "--q", "10", "--box", "8", "--samples", "15", "--burn-in", "15",
        "--thin", "3", "--seed", "7",
    )
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    csv1, csv2 = tmp_path / "a.csv", tmp_path / "b.csv"
    r1 = run_cli(*args, "--out", str(out1), "--out-csv", str(csv1))
    r2 = run_cli(*args, "--out", str(out2), "--out-csv", str(csv2))
    assert r1.returncode in (0, 1) and r1.returncode == r2.returncode
    assert out1.read_bytes() == out2.read_bytes()
    assert csv1.read_bytes() == csv2.read_bytes()
    report = json.loads(out1.read_text())
    validate_report(report)


def test_sample_report_schema(tmp_path):
    out = tmp_path / "sample.json"
    res = run_cli(
        "sample", "--q", "4", "--qb", "2", "--domain", "diamond:1",
        "--samples", "10", "--burn-in", "10", "--seed", "1", "--slow",
        "--out", str(out),
    )
    assert res.returncode == 0, res.stderr
    report = json.loads(out.read_text())
    validate_report(report)
    assert len(report["results"]["edge_marginals"]) == 4


def test_verify_identities_command(tmp_path):
    out = tmp_path / "ids.json"
    res = run_cli(
        "verify-identities", "--radius-max", "1", "--winding-samples", "100",
        "--seed", "2", "--out", str(out),
    )
    assert res.returncode == 0, res.stderr
    report = json.loads(out.read_text())
    validate_report(report)
    assert all(c["passed"] for c in report["checks"])


def test_sample_coupled_parameters(tmp_path):
    out = tmp_path / "coupled.json"
    res = run_cli(
        "sample", "--q", "10", "--coupled", "--domain", "diamond:2",
        "--samples", "10", "--burn-in", "10", "--seed", "4", "--out", str(out),
    )
    assert res.returncode == 0, res.stderr
    report = json.loads(out.read_text())
    assert report["params"]["q_b"].startswith("8.87")


def test_drift_negative_lambda(tmp_path):
    out = tmp_path / "neg.json"
    res = run_cli(
        "drift", "--q", "10", "--negative-lambda", "--box", "16", "--samples", "60",
        "--burn-in", "30", "--thin", "3", "--seed", "5", "--out", str(out),
    )
    report = json.loads(out.read_text())
    assert float(report["params"]["lambda"]) < 0
    assert float(report["results"]["tanh_lambda"]) < 0


def test_verify_coupling_float_backend(tmp_path):
    out = tmp_path / "float.json"
    res = run_cli(
        "verify-coupling", "--domain", "diamond:1", "--q", "9", "--backend", "float",
        "--out", str(out),
    )
    assert res.returncode == 0, res.stderr
    report = json.loads(out.read_text())
    assert all(c["passed"] for c in report["checks"])


def test_verify_coupling_reports_byte_identical(tmp_path):
    out1, out2 = tmp_path / "r1.json", tmp_path / "r2.json"
    args = ("verify-coupling", "--domain", "diamond:1", "--backend", "symbolic")
    assert run_cli(*args, "--out", str(out1)).returncode == 0
    assert run_cli(*args, "--out", str(out2)).returncode == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_usage_error_exit_code():
    res = run_cli("drift")  # missing required --q
    assert res.returncode == 2
    res = run_cli("no-such-command")
    assert res.returncode == 2


def test_bad_domain_is_usage_error():
    res = run_cli("verify-coupling", "--domain", "diamond:1@0,0")
    assert res.returncode == 2  # parity mismatch surfaces as usage error


def test_fmt_number():
    assert fmt_number(3) == "3"
    assert fmt_number(0.1) == "0.10000000000000001"
    from fractions import Fraction

    assert fmt_number(Fraction(2, 3)) == "2/3"
    with pytest.raises(TypeError):
        fmt_number(True)
