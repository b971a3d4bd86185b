"""Randomised property suites behind the ``validate`` command."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..fluctuation import FluctuationSolver, solve_interface
from ..flux import FluxSolver, build_blocks, roe_jacobian
from ..grid import BoundarySpec, FieldState, build_grid
from ..linalg import validate_decomposition
from ..source import seed_equilibrium
from ..systems import acoustics_model, heat_augmented_eigen, heat_model
from ..systems.analytic import analytic_sine_steady


@dataclass
class SuiteResult:
    name: str
    passed: bool
    worst: float
    tol: float

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"{flag}  {self.name}: worst {self.worst:.3e} (tol {self.tol:.0e})"


def _result(name, worst, tol):
    return SuiteResult(name, bool(worst <= tol), float(worst), tol)


def eigen_suite(rng, draws=100, tol=1e-12) -> SuiteResult:
    worst = 0.0
    K, rho = rng.uniform(0.1, 10.0, (2, draws))
    m = acoustics_model(K=K, rho=rho)
    A = m.coefficient_matrices()
    worst = max(worst, *validate_decomposition(A, m.eigen(A)))
    k, r, eps = rng.uniform(0.01, 10.0, (3, draws))
    h = heat_model(k=k, r=r, eps=eps)
    A = h.coefficient_matrices()
    worst = max(worst, *validate_decomposition(A, h.eigen(A)))
    u = rng.uniform(-20.0, 20.0, draws)
    M = np.zeros((draws, 3, 3))
    M[:, 0, 1] = r
    M[:, 1, 0] = k / eps
    M[:, 1, 2] = u / eps
    worst = max(worst, *validate_decomposition(M, heat_augmented_eigen(k, r, eps, u)))
    # generic block construction on fully augmented acoustics
    aug = acoustics_model(K=K, rho=rho).augmentation()
    U = rng.normal(size=(draws, 2))
    Ub = np.hstack([U, aug.theta])
    blocks = build_blocks(Ub, aug, np.zeros((draws, 2, 2)))
    d = aug.eigen(blocks.M[:, :2, :2], blocks.M[:, :2, 2:])
    worst = max(worst, *validate_decomposition(blocks.M, d))
    return _result("eigendecomposition reconstruction", worst, tol)


def roe_suite(rng, pairs=1000, tol=1e-13) -> SuiteResult:
    r, eps = 1.0, rng.uniform(0.05, 2.0)
    h = heat_model(k=1.0, r=r, eps=eps)
    aug = h.augmentation()
    Ui = np.column_stack([rng.normal(0, 5, pairs), rng.normal(0, 5, pairs), rng.uniform(0.01, 5, pairs)])
    Uj = np.column_stack([rng.normal(0, 5, pairs), rng.normal(0, 5, pairs), rng.uniform(0.01, 5, pairs)])
    bi, bj = build_blocks(Ui, aug), build_blocks(Uj, aug)
    Mt = roe_jacobian(bi, bj)
    dF = bj.F - bi.F
    res = np.abs(dF - np.einsum("...ij,...j->...i", Mt, Uj - Ui))
    scale = np.maximum(1.0, np.maximum(np.abs(bi.F), np.abs(bj.F)).max(axis=-1))
    return _result("Roe property dF = M~ dU", float(np.max(res.max(axis=-1) / scale)), tol)


def _equilibrium_models(rng, N):
    grid = build_grid(0.0, 10.0, N)
    x = grid.centers
    sine = analytic_sine_steady(1.0, 1.8, 2.0)
    yield grid, heat_model(k=np.full(N, 0.5), eps=1.0)
    yield grid, heat_model(k=sine.medium["k"](x), eps=1.0)
    yield grid, heat_model(k=np.where(x < 5, 1.0, 4.0), eps=0.3)
    yield grid, heat_model(k=np.full(N, 3.0), r=2.0, eps=0.7, phi=0.5)
    yield grid, heat_model(k=rng.uniform(0.1, 5.0, N), r=1.0, eps=0.5, phi=rng.uniform(-1, 1, N))
    yield grid, acoustics_model(K=rng.uniform(0.5, 2.0, N), rho=rng.uniform(0.5, 4.0, N))


def well_balanced_suite(rng, steps=1000, tol=1e-13) -> tuple[SuiteResult, SuiteResult]:
    """Seeded discrete equilibria must not move; also tracks the sum identity."""
    worst = 0.0
    identity = 0.0
    for grid, model in _equilibrium_models(rng, 40):
        U0 = seed_equilibrium(model, rng.normal(size=model.n), grid.dx)
        # ghosts from the same equilibrium chain keep the boundary at rest
        bc = BoundarySpec.transmissive(model.n)
        for cls in (FluctuationSolver, FluxSolver):
            s = cls(model, grid, bc, 0.9)
            state = s.initial_state(U0) if cls is FluxSolver else FieldState(0.0, 0, U0)
            final = s.run(state, steps=steps)
            U = final.U[:, : model.n]
            worst = max(worst, float(np.max(np.abs(U - U0) / (1.0 + np.abs(U0)))))
            identity = max(identity, s.identity_residual)
    return (
        _result("well-balancing no-op over 1000 steps", worst, tol),
        _result("fluctuation sum identity", identity, tol),
    )


def random_identity_suite(rng, trials=1000, tol=1e-13) -> SuiteResult:
    k = rng.uniform(0.05, 5.0, (2, trials))
    eps = rng.uniform(0.05, 2.0)
    h = heat_model(k=np.concatenate(k), r=1.0, eps=eps, phi=0.3)
    A = h.coefficient_matrices()
    U = rng.normal(size=(2 * trials, 2))
    S = h.source(U)
    i, j = slice(0, trials), slice(trials, 2 * trials)
    sol = solve_interface(U[i], U[j], A[i], A[j], S[i], S[j], 0.1, h)
    target = np.einsum("...ij,...j->...i", sol.A_tilde, U[j] - U[i]) - 0.05 * (S[i] + S[j])
    scale = np.maximum(1.0, np.abs(target).max(axis=-1))
    res = np.abs(sol.Dminus + sol.Dplus - target).max(axis=-1) / scale
    return _result("fluctuation sum identity (random interfaces)", float(np.max(res)), tol)


def spectrum_suite(rng, draws=100, tol=1e-12) -> SuiteResult:
    """Augmented Jacobian spectrum = spectrum of A plus n*n (or m) zeros."""
    worst = 0.0
    K, rho = rng.uniform(0.1, 10.0, (2, draws))
    acou = acoustics_model(K=K, rho=rho)
    k, r, eps = rng.uniform(0.05, 10.0, (3, draws))
    heat = heat_model(k=k, r=r, eps=eps)
    # the reduced [u, q, k] form needs one r and eps for the whole batch
    heat1 = heat_model(k=k, r=r[0], eps=eps[0])
    cases = (
        (acou, acou.augmentation()),
        (heat, heat.full_augmentation()),
        (heat1, heat1.augmentation()),
    )
    for model, aug in cases:
        U = rng.normal(size=(draws, model.n))
        Ub = np.hstack([U, aug.theta])
        blocks = build_blocks(Ub, aug, aug.A0)
        lam_A = model.eigen(model.coefficient_matrices()).lambdas
        expected = np.sort(np.concatenate([lam_A, np.zeros((draws, aug.m))], axis=-1), axis=-1)
        # characteristic polynomial of M at each expected eigenvalue
        size = model.n + aug.m
        for c in range(size):
            lam = expected[:, c]
            det = np.linalg.det(blocks.M - lam[:, None, None] * np.eye(size))
            scale = np.maximum(1.0, np.abs(blocks.M).max(axis=(-2, -1))) ** size
            worst = max(worst, float(np.max(np.abs(det) / scale)))
        # and the numerical spectrum itself
        got = np.sort(np.linalg.eigvals(blocks.M).real, axis=-1)
        scale = np.maximum(1.0, np.abs(blocks.M).max(axis=(-2, -1)))
        worst = max(worst, float(np.max(np.abs(got - expected).max(axis=-1) / scale)))
    return _result("augmented spectrum = spectrum(A) + zeros", worst, tol)


def run_all(seed: int = 20240601) -> list[SuiteResult]:
    rng = np.random.default_rng(seed)
    out = [eigen_suite(rng), roe_suite(rng)]
    out.extend(well_balanced_suite(rng))
    out.append(random_identity_suite(rng))
    out.append(spectrum_suite(rng))
    return out
