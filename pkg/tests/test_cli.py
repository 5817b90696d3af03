import json

import pytest

from ricbounds.core.models import grid_point
from ricbounds.main import EXIT_DOMAIN, EXIT_OK, EXIT_SOLVER, EXIT_USAGE, cli_main
from ricbounds.services.implicit_bounds import ric_bounds
from ricbounds.services.logger import read_logs


def _values(text):
    out = {}
    for line in text.splitlines():
        if "=" in line:
            key, value = line.split("=", 1)
            out[key.strip()] = value.strip()
    return out


def test_bounds(capsys):
    assert cli_main(["bounds", "--delta", "0.25", "--rho", "0.1"]) == EXIT_OK
    values = _values(capsys.readouterr().out)
    expected = ric_bounds(grid_point(0.25, 0.1))
    assert float(values["lower"]) == expected.lower
    assert float(values["upper"]) == expected.upper


def test_sampling_omp(capsys):
    assert cli_main(["sampling", "omp", "--k", "2", "--N", "1000"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "77"


def test_sampling_min_gamma(capsys):
    assert cli_main(["sampling", "min-gamma", "--threshold", "0.3333333333333333"]) == EXIT_OK
    assert float(capsys.readouterr().out) == pytest.approx(43.633, abs=1e-3)


def test_asymptotic_gamma_limit(capsys):
    code = cli_main(["asymptotic", "--regime", "gamma_limit", "--gamma", "300", "--cu", "0.3333333", "--cl", "0.3333333"])
    assert code == EXIT_OK
    values = _values(capsys.readouterr().out)
    assert float(values["upper"]) == pytest.approx(0.1199145, abs=1e-6)
    assert float(values["lower"]) == pytest.approx(0.1110256, abs=1e-6)


def test_asymptotic_warning_goes_to_stderr(capsys):
    assert cli_main(["asymptotic", "--regime", "small_rho", "--delta", "0.25", "--rho", "1e-4", "--c", "6"]) == EXIT_OK
    captured = capsys.readouterr()
    assert "RegimeWarning" in captured.err
    values = _values(captured.out)
    assert float(values["upper"]) == pytest.approx(0.0817357, abs=5e-7)
    assert values["regime_valid"] == "False"
    assert "wishart_upper" in values


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["bounds", "--delta", "0.25"],
        ["bounds", "--delta", "0.25", "--rho", "0.1", "--colour", "red"],
        ["asymptotic", "--regime", "small_rho", "--delta", "0.25"],
        ["empirical", "--k", "2"],
    ],
)
def test_usage_errors(argv, capsys):
    assert cli_main(argv) == EXIT_USAGE
    assert "usage" in capsys.readouterr().err


def test_domain_error():
    assert cli_main(["bounds", "--delta", "1.5", "--rho", "0.1"]) == EXIT_DOMAIN


def test_infeasible_is_solver_exit():
    assert cli_main(["sampling", "omp", "--k", "20", "--N", "100"]) == EXIT_SOLVER


def test_verify(capsys):
    assert cli_main(["verify", "--samples", "200"]) == EXIT_OK
    assert "verify: all checks passed" in capsys.readouterr().out


def test_compare_to_file(tmp_path):
    out = tmp_path / "sweep.csv"
    argv = ["compare", "--regime", "small_rho", "--fixed", "0.25", "--start", "-4", "--end", "-1",
            "--points", "3", "--c", "6.5", "--out", str(out)]
    assert cli_main(argv) == EXIT_OK
    lines = out.read_text(encoding="utf-8").splitlines()
    assert lines[0].startswith("delta,rho,implicit_lower")
    assert len(lines) == 4


def test_compare_from_spec_file_as_json(tmp_path, capsys):
    spec = tmp_path / "sweep.txt"
    spec.write_text("regime = small_delta\nfixed = 0.5\nstart = -20\nend = -10\npoints = 2\nc = 1.5\n", encoding="utf-8")
    assert cli_main(["compare", "--spec", str(spec), "--format", "json"]) == EXIT_OK
    records = json.loads(capsys.readouterr().out)
    assert [r["delta"] for r in records] == pytest.approx([1e-20, 1e-10])


def test_compare_needs_a_sweep():
    assert cli_main(["compare", "--regime", "small_rho"]) == EXIT_DOMAIN


def test_empirical_dump_and_load(tmp_path, capsys):
    dump = tmp_path / "a.ricm"
    assert cli_main(["empirical", "--n", "8", "--N", "12", "--k", "2", "--seed", "3", "--dump", str(dump)]) == EXIT_OK
    first = capsys.readouterr().out
    assert "k=2 n=8 N=12 mode=exhaustive supports=66" in first
    assert cli_main(["empirical", "--load", str(dump), "--k", "2", "--seed", "3"]) == EXIT_OK
    assert capsys.readouterr().out == first


def test_cli_runs_are_logged(run_log_enabled):
    assert cli_main(["sampling", "omp", "--k", "2", "--N", "1000"]) == EXIT_OK
    assert cli_main(["bounds", "--delta", "2", "--rho", "0.1"]) == EXIT_DOMAIN
    entries = [entry for entry in read_logs() if entry["category"] == "cli"]
    assert [(entry["action"], entry["status"]) for entry in entries] == [
        ("sampling_omp", "success"),
        ("bounds", "error"),
    ]
