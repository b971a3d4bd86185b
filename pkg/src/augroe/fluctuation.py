"""Augmented Roe solver in fluctuation form.

At each interface the source integral dV enters the linear Riemann problem
as a stationary jump, so

    D-  =  sum_{lambda < 0} (lambda alpha - beta) e,
    D+  =  sum_{lambda > 0} (lambda alpha - beta) e,

with alpha = P^-1 dU and beta = P^-1 dV. A discrete equilibrium
(A~ dU = dV) gives beta = lambda alpha and therefore no update at all.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace

import numpy as np

from .errors import ConfigurationError, NumericalFailure, ResonantSource
from .kernels import fluctuation_increment
from .grid import BoundaryClosure, BoundarySpec, FieldState, Grid, cfl_dt
from .linalg import EigenDecomposition, matvec
from .source import delta_v

log = logging.getLogger(__name__)

ZERO_TOL = 1e-12


@dataclass(frozen=True)
class InterfaceSolve:
    A_tilde: np.ndarray
    decomp: EigenDecomposition
    alpha: np.ndarray
    beta: np.ndarray
    Dminus: np.ndarray
    Dplus: np.ndarray


def interface_average(A_i, A_ip1):
    return 0.5 * (np.asarray(A_i, dtype=float) + np.asarray(A_ip1, dtype=float))


def zero_waves(lambdas) -> np.ndarray:
    """Mask of eigenvalues treated as exactly zero."""
    lam = np.asarray(lambdas)
    scale = np.maximum(1.0, np.max(np.abs(lam), axis=-1, keepdims=True))
    return np.abs(lam) <= ZERO_TOL * scale


def wave_weights(lambdas):
    """Share of each wave going left and right; zero waves split evenly."""
    lam = np.asarray(lambdas)
    zero = zero_waves(lam)
    wminus = np.where(zero, 0.5, (lam < 0).astype(float))
    wplus = np.where(zero, 0.5, (lam > 0).astype(float))
    return wminus, wplus, zero


def split_fluctuations(decomp: EigenDecomposition, alpha, beta):
    wminus, wplus, zero = wave_weights(decomp.lambdas)
    coef = np.where(zero, -beta, decomp.lambdas * alpha - beta)
    return matvec(decomp.P, wminus * coef), matvec(decomp.P, wplus * coef)


def solve_interface(U_i, U_ip1, A_i, A_ip1, S_i, S_ip1, dx, system) -> InterfaceSolve:
    """Linearised Riemann problem with a singular source at one (or many) interfaces."""
    At = interface_average(A_i, A_ip1)
    d = system.eigen(At)
    dU = np.asarray(U_ip1, dtype=float) - np.asarray(U_i, dtype=float)
    dV = delta_v(S_i, S_ip1, dx)
    alpha = matvec(d.Pinv, dU)
    beta = matvec(d.Pinv, dV)
    bad = ~np.isfinite(alpha + beta)
    if np.any(bad):
        where = np.argwhere(bad)[0]
        raise NumericalFailure("non-finite wave strengths", interface=int(where[0]) if len(where) > 1 else None)
    Dm, Dp = split_fluctuations(d, alpha, beta)
    return InterfaceSolve(At, d, alpha, beta, Dm, Dp)


def intermediate_states(solve: InterfaceSolve, U_i, U_ip1):
    """States either side of the stationary source jump.

    A~ (U+ - U-) = dV holds by construction. Zero waves carrying source
    strength have no finite intermediate state.
    """
    lam = solve.decomp.lambdas
    zero = zero_waves(lam)
    scale = max(1.0, float(np.max(np.abs(solve.beta))), float(np.max(np.abs(solve.alpha))))
    if np.any(zero & (np.abs(solve.beta) > ZERO_TOL * scale)):
        raise ResonantSource("zero eigenvalue carries a nonzero source strength")
    safe = np.where(zero, 1.0, lam)
    gamma = np.where(zero, solve.alpha, solve.alpha - solve.beta / safe)
    left = np.where(lam < 0, gamma, 0.0) * ~zero
    right = np.where(lam > 0, gamma, 0.0) * ~zero
    Um = np.asarray(U_i, dtype=float) + matvec(solve.decomp.P, left)
    Up = np.asarray(U_ip1, dtype=float) - matvec(solve.decomp.P, right)
    return Um, Up


class _Stepper:
    """Shared time loop: ghosts, constant dt, termination and failure checks."""

    scheme = ""
    check_every = 500

    def __init__(self, system, grid: Grid, bc: BoundarySpec, cfl: float, case=None):
        if system.N != grid.N:
            raise ConfigurationError(f"model has {system.N} cells, grid has {grid.N}")
        self.system = system
        self.grid = grid
        self.dx = grid.dx
        self.bc = bc
        self.cfl = cfl
        self.case = case
        self.closure = BoundaryClosure.for_system(bc, self.dx, system)
        self.ext = system.extended()
        self.lam_max = system.max_speed()
        self.dt = cfl_dt(grid, self.lam_max, cfl)

    def ghosts(self, U):
        return self.closure.ghosts(U)

    def with_ghosts(self, U):
        g = self.closure.ghosts(U)
        return np.concatenate([g[:1], U, g[1:]], axis=0)

    def increment(self, U, dt):
        raise NotImplementedError

    def step(self, state: FieldState, dt: float | None = None) -> FieldState:
        dt = self.dt if dt is None else dt
        U = np.asarray(state.U)
        U_new = U + self.increment(U, dt)
        if not np.all(np.isfinite(U_new)):
            raise NumericalFailure("non-finite state", step=state.step + 1, case=self.case)
        return FieldState(state.t + dt, state.step + 1, U_new)

    def run(
        self,
        state: FieldState,
        steps: int | None = None,
        t_end: float | None = None,
        residual: float | None = None,
        max_steps: int = 10_000_000,
    ) -> FieldState:
        """Advance until exactly one of ``steps``, ``t_end`` or ``residual`` is met."""
        if sum(x is not None for x in (steps, t_end, residual)) != 1:
            raise ConfigurationError("give exactly one of steps, t_end, residual")
        U = np.array(state.U, dtype=float)
        t, n = state.t, state.step
        dt = self.dt
        done = 0
        while True:
            if steps is not None and done >= steps:
                break
            h = dt
            if t_end is not None:
                remaining = t_end - t
                if remaining <= 1e-12 * max(1.0, abs(t_end)):
                    break
                h = min(dt, remaining)
            dU = self.increment(U, h)
            U += dU
            t += h
            n += 1
            done += 1
            if done % self.check_every == 0 and not np.all(np.isfinite(U)):
                raise NumericalFailure("non-finite state", step=n, case=self.case)
            if residual is not None:
                if float(np.max(np.abs(dU))) / h <= residual:
                    break
                if done >= max_steps:
                    log.warning("residual %g not reached after %d steps", residual, done)
                    break
        if not np.all(np.isfinite(U)):
            raise NumericalFailure("non-finite state", step=n, case=self.case)
        log.debug("%s: %d steps to t=%.6g", self.scheme, done, t)
        return replace(FieldState(t, n, U), ghosts=self.ghosts(U))


class FluctuationSolver(_Stepper):
    """Well-balanced solver; interface eigenstructure is precomputed once.

    ``check_identity`` records max |D- + D+ - (A~ dU - dV)| over all steps.
    """

    scheme = "augmented-fluctuation"

    def __init__(
        self, system, grid, bc, cfl=0.8, *, check_identity=False, balanced=True, fast=True, case=None
    ):
        super().__init__(system, grid, bc, cfl, case)
        self.fast = fast
        A = self.ext.coefficient_matrices()
        self.A_tilde = interface_average(A[:-1], A[1:])
        self.decomp = self.ext.eigen(self.A_tilde)
        self.s0, self.G = self.ext.source_terms()
        wminus, wplus, zero = wave_weights(self.decomp.lambdas)
        lam = np.where(zero, 0.0, self.decomp.lambdas)
        P, Pinv = self.decomp.P, self.decomp.Pinv
        # D-/+ = P W-/+ (Lambda Pinv dU - Pinv dV) folded into matrices
        self.Mm = np.einsum("...ij,...j,...jk->...ik", P, wminus * lam, Pinv)
        self.Mp = np.einsum("...ij,...j,...jk->...ik", P, wplus * lam, Pinv)
        self.Nm = np.einsum("...ij,...j,...jk->...ik", P, wminus, Pinv)
        self.Np = np.einsum("...ij,...j,...jk->...ik", P, wplus, Pinv)
        self.balanced = balanced
        self.check_identity = check_identity
        self.identity_residual = 0.0

    def source(self, Ue):
        return self.s0 + (self.G @ Ue[..., None])[..., 0]

    def fluctuations(self, Ue):
        dU = (Ue[1:] - Ue[:-1])[..., None]
        Dm = (self.Mm @ dU)[..., 0]
        Dp = (self.Mp @ dU)[..., 0]
        if self.balanced:
            S = self.source(Ue)
            dV = (0.5 * self.dx * (S[:-1] + S[1:]))[..., None]
            Dm -= (self.Nm @ dV)[..., 0]
            Dp -= (self.Np @ dV)[..., 0]
            if self.check_identity:
                r = Dm + Dp - ((self.A_tilde @ dU) - dV)[..., 0]
                scale = max(1.0, float(np.max(np.abs(self.A_tilde @ dU))), float(np.max(np.abs(dV))))
                self.identity_residual = max(self.identity_residual, float(np.max(np.abs(r))) / scale)
        return Dm, Dp

    def increment(self, U, dt):
        if self.fast:
            out = np.empty_like(U)
            r = fluctuation_increment(
                self.with_ghosts(U), self.A_tilde, self.Mm, self.Mp, self.Nm, self.Np,
                self.s0, self.G, self.dx, dt, self.balanced, out,
            )
            self.identity_residual = max(self.identity_residual, r)
            return out
        Dm, Dp = self.fluctuations(self.with_ghosts(U))
        return -(dt / self.dx) * (Dm[1:] + Dp[:-1])


def step(state: FieldState, system, grid: Grid, bc: BoundarySpec, cfl: float) -> FieldState:
    """One fluctuation-form step (builds the solver; use FluctuationSolver for loops)."""
    return FluctuationSolver(system, grid, bc, cfl).step(state)

