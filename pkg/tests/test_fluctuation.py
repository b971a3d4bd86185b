import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from augroe.errors import ConfigurationError, ResonantSource
from augroe.fluctuation import (
    FluctuationSolver,
    interface_average,
    intermediate_states,
    solve_interface,
    step,
    wave_weights,
)
from augroe.grid import BoundarySpec, Dirichlet, Extrapolate, FieldState, build_grid
from augroe.harness.cases import hump
from augroe.source import seed_equilibrium
from augroe.systems import acoustics_model, analytic_sine_steady, heat_model


def test_interface_average_examples():
    A = acoustics_model(K=1.0, rho=np.array([1.0, 4.0])).coefficient_matrices()
    assert interface_average(A[0], A[1])[1, 0] == pytest.approx(0.625)
    np.testing.assert_array_equal(interface_average(A[0], A[0]), A[0])
    H = heat_model(k=np.array([1.0, 4.0])).coefficient_matrices()
    At = interface_average(H[0], H[1])
    np.testing.assert_allclose(At, [[0, 1], [2.5, 0]])
    lam = heat_model(k=1.0).eigen(At).lambdas
    np.testing.assert_allclose(lam, [-np.sqrt(2.5), np.sqrt(2.5)])


def test_wave_weights_split_zero_waves():
    wm, wp, zero = wave_weights(np.array([-2.0, 1e-15, 3.0]))
    np.testing.assert_array_equal(wm, [1, 0.5, 0])
    np.testing.assert_array_equal(wp, [0, 0.5, 1])
    np.testing.assert_array_equal(zero, [False, True, False])


def test_hand_computed_acoustics_fluctuations():
    m = acoustics_model(K=1.0, rho=1.0)
    A = m.coefficient_matrices()[0]
    s = solve_interface([0, 0], [1, 0], A, A, [0, 0], [0, 0], 0.1, m)
    np.testing.assert_allclose(s.alpha, [-0.5, 0.5])
    np.testing.assert_allclose(s.Dminus, [-0.5, 0.5])
    np.testing.assert_allclose(s.Dplus, [0.5, 0.5])
    np.testing.assert_allclose(s.Dminus + s.Dplus, A @ [1, 0])


def _random_heat_interfaces(rng, n):
    k = rng.uniform(0.05, 5.0, (2, n))
    m = heat_model(k=np.concatenate(k), r=rng.uniform(0.5, 2), eps=rng.uniform(0.05, 2), phi=0.4)
    A = m.coefficient_matrices()
    U = rng.normal(size=(2 * n, 2))
    S = m.source(U)
    i, j = slice(0, n), slice(n, 2 * n)
    return m, (U[i], U[j], A[i], A[j], S[i], S[j])


@given(st.integers(0, 2**32 - 1))
def test_sum_identity_property(seed):
    rng = np.random.default_rng(seed)
    m, (Ui, Uj, Ai, Aj, Si, Sj) = _random_heat_interfaces(rng, 50)
    s = solve_interface(Ui, Uj, Ai, Aj, Si, Sj, 0.2, m)
    target = np.einsum("...ij,...j->...i", s.A_tilde, Uj - Ui) - 0.1 * (Si + Sj)
    scale = np.maximum(1, np.abs(target).max(-1, keepdims=True))
    assert np.max(np.abs(s.Dminus + s.Dplus - target) / scale) <= 1e-13


@given(st.integers(0, 2**32 - 1))
def test_intermediate_states_property(seed):
    rng = np.random.default_rng(seed)
    m, (Ui, Uj, Ai, Aj, Si, Sj) = _random_heat_interfaces(rng, 50)
    s = solve_interface(Ui, Uj, Ai, Aj, Si, Sj, 0.2, m)
    Um, Up = intermediate_states(s, Ui, Uj)
    dV = 0.1 * (Si + Sj)
    r = np.einsum("...ij,...j->...i", s.A_tilde, Up - Um) - dV
    assert np.max(np.abs(r) / np.maximum(1, np.abs(dV).max(-1, keepdims=True))) <= 1e-13


def test_intermediate_states_homogeneous_and_resonant():
    m = acoustics_model(K=1.0, rho=1.0)
    A = m.coefficient_matrices()[0]
    s = solve_interface([0, 0], [1, 0], A, A, [0, 0], [0, 0], 0.1, m)
    Um, Up = intermediate_states(s, [0, 0], [1, 0])
    np.testing.assert_allclose(Um, Up)
    np.testing.assert_allclose(Um, [0.5, -0.5])

    class Degenerate:
        # A with a zero eigenvalue; a source along it has no stationary jump
        @staticmethod
        def eigen(A):
            from augroe.linalg import EigenDecomposition

            return EigenDecomposition(np.array([0.0, 1.0]), np.eye(2), np.eye(2))

    A0 = np.diag([0.0, 1.0])
    s = solve_interface([0, 0], [0, 0], A0, A0, [1, 0], [1, 0], 0.1, Degenerate)
    with pytest.raises(ResonantSource):
        intermediate_states(s, [0, 0], [0, 0])


def test_equilibrium_gives_zero_fluctuations():
    g = build_grid(0.0, 10.0, 200)
    k = analytic_sine_steady(1.0, 1.8, 2.0).medium["k"](g.centers)
    m = heat_model(k=k, eps=0.3)
    U = seed_equilibrium(m, [0.0, -1.0], g.dx)
    A = m.coefficient_matrices()
    S = m.source(U)
    s = solve_interface(U[:-1], U[1:], A[:-1], A[1:], S[:-1], S[1:], g.dx, m)
    assert np.max(np.abs(s.Dminus)) + np.max(np.abs(s.Dplus)) <= 1e-13


def test_constant_state_homogeneous_unchanged():
    g = build_grid(0.0, 1.0, 50)
    m = acoustics_model(K=1.0, rho=np.full(50, 2.0))
    U = np.tile([0.3, -0.2], (50, 1))
    out = step(FieldState(0.0, 0, U), m, g, BoundarySpec.transmissive(2), 0.9)
    np.testing.assert_array_equal(out.U, U)


def test_linear_steady_state_one_step():
    g = build_grid(0.0, 10.0, 20)
    x = g.centers
    m = heat_model(k=np.full(20, 0.5), eps=1.0)
    U = np.stack([2 * x, -np.ones(20)], -1)
    bc = BoundarySpec((Extrapolate(), Dirichlet(-1.0)), (Dirichlet(20.0), Extrapolate()))
    out = step(FieldState(0.0, 0, U), m, g, bc, 0.8)
    assert np.max(np.abs(out.U - U)) <= 1e-14


def test_acoustic_hump_splits_symmetrically():
    g = build_grid(0.0, 1.0, 100)
    m = acoustics_model(K=1.0, rho=np.ones(100))
    U = np.stack([hump(g.centers), np.zeros(100)], -1)
    s = FluctuationSolver(m, g, BoundarySpec.transmissive(2), 0.8)
    out = s.run(FieldState(0.0, 0, U), steps=10)
    p, u = out.U[:, 0], out.U[:, 1]
    # symmetric about x0 = 0.4 (cell 40 boundary): p even, u odd
    np.testing.assert_allclose(p[:40][::-1], p[40:80], atol=1e-15)
    np.testing.assert_allclose(u[:40][::-1], -u[40:80], atol=1e-15)
    assert abs(p.sum() - U[:, 0].sum()) <= 1e-13 * U[:, 0].sum()


def test_fast_and_reference_paths_agree(rng):
    g = build_grid(0.0, 10.0, 40)
    m = heat_model(k=rng.uniform(0.2, 3, 40), eps=0.7, phi=rng.uniform(-1, 1, 40))
    U0 = rng.normal(size=(40, 2))
    bc = BoundarySpec((Extrapolate(), Dirichlet(-1.0)), (Dirichlet(2.0), Extrapolate()))
    a = FluctuationSolver(m, g, bc, 0.8, fast=True).run(FieldState(0.0, 0, U0), steps=200)
    slow = FluctuationSolver(m, g, bc, 0.8, fast=False, check_identity=True)
    b = slow.run(FieldState(0.0, 0, U0), steps=200)
    assert np.max(np.abs(a.U - b.U)) <= 1e-13 * max(1, np.abs(b.U).max())
    assert slow.identity_residual <= 1e-13


def test_run_termination_rules():
    g = build_grid(0.0, 1.0, 20)
    m = acoustics_model(K=1.0, rho=1.0 + np.zeros(20))
    s = FluctuationSolver(m, g, BoundarySpec.transmissive(2), 0.5)
    st0 = FieldState(0.0, 0, np.zeros((20, 2)))
    assert s.run(st0, steps=7).step == 7
    out = s.run(st0, t_end=0.333)
    assert out.t == pytest.approx(0.333, abs=1e-14)
    assert out.ghosts is not None
    assert s.run(st0, residual=1e-10).step == 1
    with pytest.raises(ConfigurationError):
        s.run(st0)
    with pytest.raises(ConfigurationError):
        s.run(st0, steps=1, t_end=1.0)


def test_grid_model_mismatch():
    with pytest.raises(ConfigurationError):
        FluctuationSolver(heat_model(k=np.ones(5)), build_grid(0, 1, 6), BoundarySpec.transmissive(2))
