import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from augroe.fluctuation import FluctuationSolver, solve_interface
from augroe.flux import (
    FluxSolver,
    augment,
    build_blocks,
    k_average,
    project,
    roe_jacobian,
    solve_interface_flux,
    step_flux,
)
from augroe.grid import BoundarySpec, Dirichlet, Extrapolate, FieldState, build_grid
from augroe.source import seed_equilibrium
from augroe.systems import acoustics_model, heat_model


def test_augment_layout_and_round_trip():
    U = np.array([1.0, 2.0])
    A = np.array([[0.0, 1.0], [3.0, 0.0]])
    Ub = augment(U, A)
    np.testing.assert_array_equal(Ub, [1, 2, 0, 1, 3, 0])
    U2, A2 = project(Ub, 2)
    np.testing.assert_array_equal(U2, U)
    np.testing.assert_array_equal(A2, A)


def test_heat_blocks():
    eps, r = 0.5, 2.0
    aug = heat_model(k=1.0, r=r, eps=eps).augmentation()
    assert aug.theta.shape == (1, 1)
    u, q, k = 3.0, -1.0, 1.5
    b = build_blocks(np.array([u, q, k]), aug)
    np.testing.assert_allclose(b.M, [[0, r, 0], [k / eps, 0, u / eps], [0, 0, 0]])
    np.testing.assert_allclose(b.F, [r * q, k * u / eps, 0])
    c = np.sqrt(k * r / eps)
    np.testing.assert_allclose(np.sort(np.linalg.eigvals(b.M).real), [-c, 0, c], atol=1e-14)
    zero = build_blocks(np.array([0.0, 0.0, k]), aug)
    np.testing.assert_array_equal(zero.B, 0.0)


def test_roe_and_k_average_examples():
    eps = 0.5
    aug = heat_model(k=1.0, eps=eps).augmentation()
    bi = build_blocks(np.array([0.0, 0.0, 1.0]), aug)
    bj = build_blocks(np.array([0.0, 0.0, 4.0]), aug)
    assert roe_jacobian(bi, bj)[1, 0] == pytest.approx(2.5 / eps)
    np.testing.assert_array_equal(roe_jacobian(bi, bi), bi.M)
    bj = build_blocks(np.array([2.0, 0.0, 1.0]), aug)
    assert k_average(bi, bj)[1, 2] == pytest.approx(1.0 / eps)
    np.testing.assert_array_equal(k_average(bi, bi), bi.K)
    # no coefficient jump: the nonconservative product vanishes
    dUb = np.array([2.0, 0.0, 0.0])
    np.testing.assert_array_equal(k_average(bi, bj) @ dUb, 0.0)


@given(st.integers(0, 2**32 - 1))
def test_roe_property(seed):
    rng = np.random.default_rng(seed)
    aug = heat_model(k=1.0, r=rng.uniform(0.5, 2), eps=rng.uniform(0.05, 2)).augmentation()
    mk = lambda: np.column_stack([rng.normal(0, 5, 100), rng.normal(0, 5, 100), rng.uniform(0.01, 5, 100)])  # noqa: E731
    Ui, Uj = mk(), mk()
    bi, bj = build_blocks(Ui, aug), build_blocks(Uj, aug)
    res = np.abs(bj.F - bi.F - np.einsum("...ij,...j->...i", roe_jacobian(bi, bj), Uj - Ui))
    scale = np.maximum(1, np.maximum(np.abs(bi.F), np.abs(bj.F)).max(-1))
    assert np.max(res.max(-1) / scale) <= 1e-13


def test_flux_solve_at_equilibrium():
    N, dx = 10, 0.5
    m = heat_model(k=np.linspace(0.5, 3.0, N), eps=0.8, phi=0.3)
    aug = m.augmentation()
    U = seed_equilibrium(m, [1.0, -1.0], dx)
    Ub = np.hstack([U, aug.theta])
    S = m.source(U)
    s = solve_interface_flux(Ub[:-1], Ub[1:], S[:-1], S[1:], dx, aug)
    assert np.max(np.abs(s.Dminus)) + np.max(np.abs(s.Dplus)) <= 1e-13
    dVb = np.hstack([0.5 * dx * (S[:-1] + S[1:]), np.zeros((N - 1, 1))])
    expect = np.einsum("...ij,...j->...i", s.K_tilde, Ub[1:] - Ub[:-1]) + dVb
    np.testing.assert_allclose(s.Fplus - s.Fminus, expect, atol=1e-13)


def test_flux_and_fluctuation_interface_agree(rng):
    # RP-a data at the conductivity jump
    eps = 0.7
    m = heat_model(k=np.array([0.1, 0.01]), eps=eps)
    aug = m.augmentation()
    U = np.array([[-1.0, 0.0], [1.0, 0.0]])
    S = m.source(U)
    A = m.coefficient_matrices()
    fl = solve_interface(U[0], U[1], A[0], A[1], S[0], S[1], 0.1, m)
    Ub = np.hstack([U, aug.theta])
    fx = solve_interface_flux(Ub[0], Ub[1], S[0], S[1], 0.1, aug)
    np.testing.assert_allclose((fx.Dminus + fx.Dplus)[:2], fl.Dminus + fl.Dplus, atol=1e-13)
    # homogeneous constant coefficients: identical fluctuations
    m1 = heat_model(k=0.3, eps=eps)
    A1 = m1.coefficient_matrices()[0]
    fl = solve_interface(U[0], U[1], A1, A1, [0, 0], [0, 0], 0.1, m1)
    th = m1.augmentation().theta[0]
    fx = solve_interface_flux(np.r_[U[0], th], np.r_[U[1], th], [0, 0], [0, 0], 0.1, m1.augmentation())
    np.testing.assert_allclose(fx.Dminus[:2], fl.Dminus, atol=1e-14)
    np.testing.assert_allclose(fx.Dplus[:2], fl.Dplus, atol=1e-14)


def _heat_setup(rng, N=40):
    g = build_grid(0.0, 10.0, N)
    m = heat_model(k=rng.uniform(0.2, 3, N), eps=0.7, phi=rng.uniform(-1, 1, N))
    bc = BoundarySpec((Extrapolate(), Dirichlet(-1.0)), (Dirichlet(2.0), Extrapolate()))
    return g, m, bc, rng.normal(size=(N, 2))


def test_flux_matches_fluctuation_run(rng):
    g, m, bc, U0 = _heat_setup(rng)
    a = FluctuationSolver(m, g, bc, 0.8).run(FieldState(0.0, 0, U0), steps=300)
    fs = FluxSolver(m, g, bc, 0.8, check_identity=True)
    b = fs.run(fs.initial_state(U0), steps=300)
    assert np.max(np.abs(fs.physical(b).U - a.U)) <= 1e-12
    np.testing.assert_array_equal(b.U[:, 2:], fs.aug.theta)
    assert fs.identity_residual <= 1e-13 and fs.roe_residual <= 1e-13


def test_compiled_and_generic_flux_paths_agree(rng):
    g, m, bc, U0 = _heat_setup(rng)
    fast = FluxSolver(m, g, bc, 0.8)
    slow = FluxSolver(m, g, bc, 0.8, fast=False, check_identity=True)
    a = fast.run(fast.initial_state(U0), steps=200)
    b = slow.run(slow.initial_state(U0), steps=200)
    assert np.max(np.abs(a.U - b.U)) <= 1e-13 * max(1, np.abs(b.U).max())
    assert slow.identity_residual <= 1e-13 and slow.roe_residual <= 1e-13


def test_full_augmentation_acoustics(rng):
    g = build_grid(0.0, 1.0, 50)
    m = acoustics_model(K=rng.uniform(0.5, 2, 50), rho=rng.uniform(0.5, 4, 50))
    bc = BoundarySpec.transmissive(2)
    U0 = rng.normal(size=(50, 2))
    a = FluctuationSolver(m, g, bc, 0.9).run(FieldState(0.0, 0, U0), steps=100)
    fs = FluxSolver(m, g, bc, 0.9)
    assert fs.m == 4
    b = fs.run(fs.initial_state(U0), steps=100)
    assert np.max(np.abs(fs.physical(b).U - a.U)) <= 1e-12


def test_coefficients_invariant_over_many_steps(rng):
    g, m, bc, U0 = _heat_setup(rng, 20)
    fs = FluxSolver(m, g, bc, 0.8)
    out = fs.run(fs.initial_state(U0), steps=10_000)
    np.testing.assert_array_equal(out.U[:, 2], fs.aug.theta[:, 0])


def test_step_flux_constant_state():
    g = build_grid(0.0, 1.0, 10)
    m = heat_model(k=np.full(10, 0.4), eps=1.0)
    aug = m.augmentation()
    U = np.hstack([np.tile([1.5, 0.0], (10, 1)), aug.theta])
    out = step_flux(FieldState(0.0, 0, U), m, g, BoundarySpec.transmissive(2), 0.8)
    np.testing.assert_array_equal(out.U, U)
