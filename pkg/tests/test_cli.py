import subprocess
import sys

import pytest

from augroe.harness.cli import main


def test_list_cases(capsys):
    assert main(["list-cases"]) == 0
    out = capsys.readouterr().out
    assert "heat-rp-a" in out and "acoustics-transient" in out


def test_run_and_outputs(tmp_path, capsys):
    code = main(["run", "--case", "heat-steady-const-k", "--scheme", "augmented-flux", "--steps", "50", "--out", str(tmp_path), "--assert"])
    assert code == 0
    assert "linf[exact]" in capsys.readouterr().out
    assert (tmp_path / "solution.csv").exists() and (tmp_path / "report.txt").exists()


def test_run_from_config_with_override(tmp_path, capsys):
    cfg = tmp_path / "run.ini"
    cfg.write_text("[case]\nid = heat-steady-source\n[run]\ndx = 0.5\nsteps = 100000\n")
    assert main(["run", "--config", str(cfg), "--steps", "20"]) == 0
    assert "steps: 20" in capsys.readouterr().out


@pytest.mark.parametrize(
    "argv",
    [
        ["run", "--case", "unknown"],
        ["run"],
        ["run", "--case", "heat-steady-const-k", "--cfl", "2"],
        ["run", "--case", "heat-steady-const-k", "--dx", "0.3"],
        ["bogus"],
    ],
)
def test_configuration_errors_exit_1(argv, capsys):
    assert main(argv) == 1
    assert "error" in capsys.readouterr().err


def test_numerical_failure_exit_2(capsys):
    # eps far below the stability bound makes the explicit relaxation blow up
    assert main(["run", "--case", "heat-rp-const-k", "--eps-safety", "0.01", "--steps", "3000"]) == 2
    assert "numerical failure" in capsys.readouterr().err


def test_threshold_failure_exit_3(capsys):
    assert main(["run", "--case", "heat-steady-sine-k", "--steps", "10", "--assert"]) == 3
    assert "limit exceeded" in capsys.readouterr().out


def test_convergence_command(tmp_path, capsys):
    assert main(["convergence", "--case", "heat-steady-const-k", "--dx", "0.5,0.05", "--out", str(tmp_path)]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0].startswith("dx,") and len(out) == 3
    assert (tmp_path / "convergence.csv").exists()


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "augroe", "list-cases"], capture_output=True, text=True)
    assert r.returncode == 0 and "heat-steady-sine-k" in r.stdout
