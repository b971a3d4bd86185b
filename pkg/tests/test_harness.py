import numpy as np
import pytest

from augroe.errors import ConfigurationError
from augroe.harness.cases import CASES, block_average, get_case, refinement_ratio
from augroe.harness.config import load_config, parse_config
from augroe.harness.runner import (
    RunConfig,
    convergence_study,
    exceeded_limits,
    format_convergence,
    l1_norm,
    linf_norm,
    observed_order,
    run_case,
)
from augroe.harness.validate import run_all


def test_registry_ids():
    assert set(CASES) == {
        "acoustics-transient",
        "heat-steady-const-k",
        "heat-steady-sine-k",
        "heat-steady-piecewise-k",
        "heat-steady-source",
        "heat-rp-const-k",
        "heat-rp-a",
        "heat-rp-b",
    }
    with pytest.raises(ConfigurationError):
        get_case("nope")


@pytest.mark.parametrize("cid", sorted(CASES))
def test_every_case_builds_on_every_grid(cid):
    case = get_case(cid)
    for dx in case.grids:
        cfg = RunConfig(dx=dx).resolve(case)
        grid = cfg.grid(case)
        setup = case.build(grid, None)
        assert setup.U0.shape == (grid.N, 2)
        assert np.all(np.isfinite(setup.U0))


def test_block_average_and_ratio():
    fine = np.arange(12.0).reshape(6, 2)
    np.testing.assert_allclose(block_average(fine, 3), [[2, 3], [8, 9]])
    assert refinement_ratio(0.5, 0.001) == 500
    with pytest.raises(ConfigurationError):
        refinement_ratio(0.5, 0.3)
    with pytest.raises(ConfigurationError):
        block_average(fine, 4)


def test_norms_and_orders():
    U, ref = np.array([[1.0, 2.0], [3.0, 4.0]]), np.zeros((2, 2))
    np.testing.assert_allclose(linf_norm(U, ref), [3, 4])
    np.testing.assert_allclose(l1_norm(U, ref, 0.5), [2, 3])
    assert observed_order(1.0, 0.5, 0.2, 0.1) == pytest.approx(1.0)
    assert observed_order(1e-15, 1e-14, 0.2, 0.1) == "exact"


def test_run_config_validation():
    with pytest.raises(ConfigurationError):
        RunConfig(scheme="upwind")
    with pytest.raises(ConfigurationError):
        RunConfig(dx=0.5, cells=20)
    with pytest.raises(ConfigurationError):
        RunConfig(steps=1, t_end=1.0)
    with pytest.raises(ConfigurationError):
        RunConfig(cfl=1.5)
    with pytest.raises(ConfigurationError):
        run_case("heat-steady-const-k", RunConfig(dx=0.3))


def test_run_case_writes_outputs(tmp_path):
    state, rep = run_case("heat-steady-const-k", RunConfig("augmented-flux", cells=20, steps=100, out=str(tmp_path)))
    assert rep.N == 20 and rep.steps == 100
    assert max(rep.linf("exact")) <= 1e-12
    assert exceeded_limits(get_case("heat-steady-const-k"), rep) == []
    data = np.loadtxt(tmp_path / "solution.csv", delimiter=",", skiprows=1)
    assert data.shape == (20, 7)
    header = (tmp_path / "solution.csv").read_text().splitlines()[0]
    assert header == "x,u,q,u_ref,q_ref,u_abs_err,q_abs_err"
    np.testing.assert_array_equal(data[:, 1:3], state.U)
    text = (tmp_path / "report.txt").read_text()
    assert "roe_residual" in text and "linf[exact]" in text


def test_limits_report_failures():
    _, rep = run_case("heat-steady-sine-k", RunConfig(steps=10))
    assert exceeded_limits(get_case("heat-steady-sine-k"), rep)


def test_convergence_table(tmp_path):
    rows = convergence_study("heat-steady-piecewise-k", "augmented-fluctuation", [0.5, 0.05], reference="exact", out=str(tmp_path))
    assert rows[0].order == [None, None]
    assert rows[1].order[0] == pytest.approx(1.0, abs=0.05)
    assert rows[1].order[1] == "exact"
    lines = format_convergence(get_case("heat-steady-piecewise-k"), rows)
    assert lines[0].startswith("dx,linf_u,linf_q")
    assert (tmp_path / "convergence.csv").read_text().splitlines() == lines
    with pytest.raises(ConfigurationError):
        convergence_study("heat-steady-piecewise-k", "augmented-fluctuation", [0.5])


def test_fine_grid_reference_needs_t_end():
    with pytest.raises(ConfigurationError):
        run_case("acoustics-transient", RunConfig(steps=5))


def test_config_parsing(tmp_path):
    case, run = parse_config(
        "[case]\nid = heat-steady-const-k\n\n[run]\nscheme = augmented-flux  # inline\ndx = 0.5\nsteps = 10\n"
    )
    assert case == {"id": "heat-steady-const-k"}
    assert run == {"scheme": "augmented-flux", "dx": 0.5, "steps": 10}
    for bad in ("[run]\nbogus = 1\n", "[extra]\nx = 1\n", "[run]\ndx = abc\n", "no section\n"):
        with pytest.raises(ConfigurationError):
            parse_config(bad)
    with pytest.raises(ConfigurationError):
        load_config(tmp_path / "missing.ini")


def test_validate_suites_pass():
    results = run_all()
    assert len(results) == 6
    for r in results:
        assert r.passed, r.line()
