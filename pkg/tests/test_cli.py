import csv
import subprocess
import sys

import pytest

from fracbvp.cli import EXIT_DIVERGED, EXIT_NUMERIC, EXIT_OK, EXIT_USAGE, main
from fracbvp.harness import parse_csv


def test_solve_writes_nodal_csv(tmp_path, capsys):
    out = tmp_path / "y.csv"
    assert main(["solve", "--example", "ex1", "--n", "20", "--out", str(out)]) == EXIT_OK
    rows = list(csv.reader(out.open()))
    assert rows[0] == ["t", "y"] and len(rows) == 22
    assert float(rows[-1][0]) == 1.0
    assert "termination=converged" in capsys.readouterr().err


def test_solve_to_stdout(capsys):
    assert main(["solve", "--example", "ex5", "--n", "16", "--solver", "linear_explicit"]) == EXIT_OK
    assert capsys.readouterr().out.startswith("t,y\n0.0,")


def test_converge_csv(capsys):
    code = main(["converge", "--example", "ex3", "--method", "halley", "--scheme", "quadratic",
                 "--n-list", "10,20"])
    assert code == EXIT_OK
    rows = parse_csv(capsys.readouterr().out)
    assert [r["N"] for r in rows] == [10, 20] and rows[1]["rate"] > 1


def test_check_eps(capsys):
    assert main(["check-eps", "--eps-list", "0.1,0.01", "--n", "20"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "eps,sup_difference" and len(lines) == 3


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# defaults\nexample = ex1\nn = 12\n--method = halley\nscheme = quadratic\n")
    assert main(["--config", str(cfg), "solve"]) == EXIT_OK
    err = capsys.readouterr().err
    assert "N=12" in err
    assert main(["--config", str(cfg), "solve", "--n", "16"]) == EXIT_OK
    assert "N=16" in capsys.readouterr().err


@pytest.mark.parametrize("text", ["bogus = 1\n", "method = secant\n", "n = many\n", "no equals sign\n"])
def test_bad_config(tmp_path, text):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("example = ex1\n" + text)
    assert main(["--config", str(cfg), "solve", "--n", "10"]) == EXIT_USAGE


def test_usage_errors(tmp_path):
    assert main(["solve", "--example", "ex9", "--n", "10"]) == EXIT_USAGE
    assert main(["solve", "--example", "ex1"]) == EXIT_USAGE
    assert main(["solve", "--example", "ex1", "--alpha1", "1.5", "--n", "10"]) == EXIT_USAGE
    assert main(["solve", "--example", "ex1", "--n", "10", "--solver", "linear_explicit"]) == EXIT_USAGE
    assert main(["--config", str(tmp_path / "missing.cfg"), "solve", "--n", "10"]) == EXIT_USAGE
    assert main([]) == EXIT_USAGE


def test_numeric_failure_exit_code(capsys):
    code = main(["solve", "--example", "ex3", "--alpha1", "0.9", "--alpha2", "1.1", "--n", "256"])
    assert code == EXIT_NUMERIC
    assert "diverged" in capsys.readouterr().err


def test_diverged_exit_code(capsys):
    code = main(["converge", "--example", "ex1", "--n-list", "10", "--max-iter", "1", "--tol", "1e-300"])
    assert code == EXIT_OK  # hitting max_iter is not divergence
    # Newton leaves the basin and the residual passes the growth guard
    code = main(["solve", "--example", "ex3", "--alpha1", "0.9", "--alpha2", "1.1", "--n", "64"])
    assert code == EXIT_DIVERGED
    assert "growth" in capsys.readouterr().err


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "fracbvp", "--help"], capture_output=True, text=True)
    assert res.returncode == 0 and "check-eps" in res.stdout
