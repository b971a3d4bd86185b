"""Augmented Roe solver in flux form.

The coefficients theta of A(theta) become extra conserved variables with
trivial equations theta_t = 0, so that for U_bar = [U | theta]

    U_bar_t + M(U_bar) U_bar_x = S_bar,     M = [[A, B], [0, 0]],

where B = d(A U)/d theta. The conservative part is F = [A(theta) U ; 0] and
the rest, K = [[0, B], [0, 0]], is a nonconservative product treated with a
straight-line path. Fluctuations then use beta = P^-1 (K~ dU_bar + dV_bar).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError
from .fluctuation import _Stepper, wave_weights
from .grid import FieldState
from .kernels import heat_flux_increment
from .linalg import EigenDecomposition
from .source import delta_v
from .systems.heat import HeatAugmentation


def _mv(M, v):
    return (M @ v[..., None])[..., 0]


def augment(U, A) -> np.ndarray:
    """[U | a11 ... a1n, a21 ... ann]: every entry of A, row-major."""
    U = np.asarray(U, dtype=float)
    A = np.asarray(A, dtype=float)
    n = U.shape[-1]
    return np.concatenate([U, A.reshape(A.shape[:-2] + (n * n,))], axis=-1)


def project(Ubar, n: int):
    """Inverse of :func:`augment`."""
    Ubar = np.asarray(Ubar)
    return Ubar[..., :n], Ubar[..., n:].reshape(Ubar.shape[:-1] + (n, n))


@dataclass(frozen=True)
class AugmentedBlocks:
    M: np.ndarray
    K: np.ndarray
    B: np.ndarray
    F: np.ndarray


def build_blocks(Ubar, aug, A0=None) -> AugmentedBlocks:
    """Jacobian M, nonconservative block K and flux F = [A(theta) U; 0]."""
    Ubar = np.asarray(Ubar, dtype=float)
    n, m = aug.n, aug.m
    if Ubar.shape[-1] != n + m:
        raise ConfigurationError(f"augmented state needs {n + m} entries, got {Ubar.shape[-1]}")
    if A0 is None:
        A0 = aug.A0[0]
    U, theta = Ubar[..., :n], Ubar[..., n:]
    A = aug.matrix(theta, A0)
    B = aug.B(U)
    batch = Ubar.shape[:-1]
    M = np.zeros(batch + (n + m, n + m))
    M[..., :n, :n] = A
    M[..., :n, n:] = B
    K = np.zeros_like(M)
    K[..., :n, n:] = B
    F = np.zeros(batch + (n + m,))
    F[..., :n] = _mv(A, U)
    return AugmentedBlocks(M, K, B, F)


def roe_jacobian(blocks_i: AugmentedBlocks, blocks_ip1: AugmentedBlocks) -> np.ndarray:
    return 0.5 * (blocks_i.M + blocks_ip1.M)


def k_average(blocks_i: AugmentedBlocks, blocks_ip1: AugmentedBlocks) -> np.ndarray:
    return 0.5 * (blocks_i.K + blocks_ip1.K)


@dataclass(frozen=True)
class FluxInterfaceSolve:
    M_tilde: np.ndarray
    K_tilde: np.ndarray
    decomp: EigenDecomposition
    alpha: np.ndarray
    beta: np.ndarray
    Dminus: np.ndarray
    Dplus: np.ndarray
    Fminus: np.ndarray
    Fplus: np.ndarray


def _pad_source(dV, m):
    return np.concatenate([dV, np.zeros(dV.shape[:-1] + (m,))], axis=-1)


def _waves(d: EigenDecomposition, alpha, beta):
    wminus, wplus, zero = wave_weights(d.lambdas)
    coef = np.where(zero, -beta, d.lambdas * alpha - beta)
    return _mv(d.P, wminus * coef), _mv(d.P, wplus * coef)


def solve_interface_flux(Ubar_i, Ubar_ip1, S_i, S_ip1, dx, aug, A0=None) -> FluxInterfaceSolve:
    """Flux-difference Riemann solve; ``S_i``, ``S_ip1`` are physical sources."""
    n, m = aug.n, aug.m
    A0_i, A0_ip1 = (None, None) if A0 is None else A0
    bi = build_blocks(Ubar_i, aug, A0_i)
    bj = build_blocks(Ubar_ip1, aug, A0_ip1)
    Mt = roe_jacobian(bi, bj)
    Kt = k_average(bi, bj)
    d = aug.eigen(Mt[..., :n, :n], Mt[..., :n, n:])
    dUb = np.asarray(Ubar_ip1, dtype=float) - np.asarray(Ubar_i, dtype=float)
    dVb = _pad_source(delta_v(S_i, S_ip1, dx), m)
    alpha = _mv(d.Pinv, dUb)
    beta = _mv(d.Pinv, _mv(Kt, dUb) + dVb)
    Dm, Dp = _waves(d, alpha, beta)
    return FluxInterfaceSolve(Mt, Kt, d, alpha, beta, Dm, Dp, bi.F + Dm, bj.F - Dp)


class FluxSolver(_Stepper):
    """Flux-form stepping of U_bar = [U | theta].

    States passed to :meth:`run` / :meth:`step` carry the augmented layout;
    use :meth:`initial_state` and :meth:`physical` to convert. With
    ``check_identity`` the solver tracks the Roe residual |dF - M~ dU_bar|
    and |D- + D+ - (A~ dU - dV)| (both relative to the local scale).
    """

    scheme = "augmented-flux"

    def __init__(
        self, system, grid, bc, cfl=0.8, *, reduced=True, check_identity=False, fast=True, case=None
    ):
        super().__init__(system, grid, bc, cfl, case)
        self.aug = system.augmentation(reduced=reduced)
        # compiled path only for the closed-form [u, q, k] system
        self.fast = fast and isinstance(self.aug, HeatAugmentation)
        self.aug_ext = self.aug.extended()
        self.n, self.m = self.aug.n, self.aug.m
        self.s0, self.G = self.ext.source_terms()
        self.check_identity = check_identity
        self.identity_residual = 0.0
        self.roe_residual = 0.0

    def initial_state(self, U, t=0.0) -> FieldState:
        return FieldState(t, 0, np.hstack([np.asarray(U, dtype=float), self.aug.theta]))

    def physical(self, state: FieldState) -> FieldState:
        return FieldState(state.t, state.step, state.U[:, : self.n])

    def ghosts(self, Ub):
        g = self.closure.ghosts(Ub[:, : self.n])
        return np.hstack([g, Ub[[0, -1], self.n :]])

    def increment(self, Ub, dt):
        if self.fast:
            return self._increment_heat(Ub, dt)
        n, m = self.n, self.m
        aug = self.aug_ext
        U, theta = Ub[:, :n], Ub[:, n:]
        g = self.closure.ghosts(U)
        Ue = np.concatenate([g[:1], U, g[1:]], axis=0)
        th = np.concatenate([theta[:1], theta, theta[-1:]], axis=0)
        A = aug.matrix(th)
        B = aug.B(Ue)
        At = 0.5 * (A[:-1] + A[1:])
        Bt = 0.5 * (B[:-1] + B[1:])
        d = aug.eigen(At, Bt)
        dU = Ue[1:] - Ue[:-1]
        dth = th[1:] - th[:-1]
        S = self.s0 + _mv(self.G, Ue)
        dV = 0.5 * self.dx * (S[:-1] + S[1:])
        dUb = np.concatenate([dU, dth], axis=-1)
        rhs = _pad_source(_mv(Bt, dth) + dV, m)
        alpha = _mv(d.Pinv, dUb)
        beta = _mv(d.Pinv, rhs)
        Dm, Dp = _waves(d, alpha, beta)
        F = np.zeros((Ue.shape[0], n + m))
        F[:, :n] = _mv(A, Ue)
        Fm = F[:-1] + Dm
        Fp = F[1:] - Dp
        if self.check_identity:
            self._track(F, At, Bt, dU, dth, dV, Dm, Dp)
        return -(dt / self.dx) * (Fm[1:] - Fp[:-1])

    def _increment_heat(self, Ub, dt):
        r = self.aug.A0[0, 0, 1]
        eps = 1.0 / self.aug.basis[0, 1, 0]
        out = np.empty_like(Ub)
        Ue = np.concatenate([self.ghosts(Ub)[:1], Ub, self.ghosts(Ub)[1:]], axis=0)
        res, roe = heat_flux_increment(Ue, r, eps, self.s0, self.G, self.dx, dt, out)
        self.identity_residual = max(self.identity_residual, res)
        self.roe_residual = max(self.roe_residual, roe)
        return out

    def _track(self, F, At, Bt, dU, dth, dV, Dm, Dp):
        n = self.n
        MdU = _mv(At, dU) + _mv(Bt, dth)
        dF = F[1:, :n] - F[:-1, :n]
        scale = max(1.0, float(np.max(np.abs(F))))
        self.roe_residual = max(self.roe_residual, float(np.max(np.abs(dF - MdU))) / scale)
        target = _mv(At, dU) - dV
        r = Dm[:, :n] + Dp[:, :n] - target
        scale = max(1.0, float(np.max(np.abs(target))), float(np.max(np.abs(dV))))
        self.identity_residual = max(self.identity_residual, float(np.max(np.abs(r))) / scale)


def step_flux(state: FieldState, system, grid, bc, cfl: float) -> FieldState:
    """One flux-form step on an augmented state (see FluxSolver)."""
    return FluxSolver(system, grid, bc, cfl).step(state)
