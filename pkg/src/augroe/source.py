"""Sources read as jumps of a primitive V with dV/dx = S.

Only the interface integrals dV = (S_i + S_{i+1}) dx / 2 enter the schemes;
the primitive itself is kept for diagnostics.
"""

from __future__ import annotations

import numpy as np

from .linalg import solve


def source_cell_average(system, U, i=None) -> np.ndarray:
    """S(U_i) with cell-centred medium values (all cells if ``i`` is None)."""
    U = np.asarray(U, dtype=float)
    S = system.source(U)
    return S if i is None else S[i]


def delta_v(S_i, S_ip1, dx: float) -> np.ndarray:
    return 0.5 * (np.asarray(S_i, dtype=float) + np.asarray(S_ip1, dtype=float)) * dx


def interface_source_integrals(S, dx: float) -> np.ndarray:
    """dV at every interior interface of a column of cell sources (N-1 rows)."""
    return delta_v(S[:-1], S[1:], dx)


def primitive(S, dx: float) -> np.ndarray:
    """V at the N+1 interfaces with V = 0 at the left edge."""
    S = np.asarray(S, dtype=float)
    V = np.zeros((S.shape[0] + 1,) + S.shape[1:])
    V[1:] = np.cumsum(S * dx, axis=0)
    return V


def discrete_equilibrium_jump(A_tilde, S_i, S_ip1, dx: float) -> np.ndarray:
    """dU with A~ dU = dV, the stationary jump of the augmented schemes."""
    return solve(A_tilde, delta_v(S_i, S_ip1, dx))


def seed_equilibrium(system, U_left, dx: float) -> np.ndarray:
    """Cells 0..N-1 built by chaining equilibrium jumps from ``U_left``.

    The source is affine, S = s0 + G U, so each jump solves
    (A~ - dx/2 G_{i+1}) U_{i+1} = A~ U_i + dx/2 (s0_i + s0_{i+1} + G_i U_i).
    """
    A = system.coefficient_matrices()
    s0, G = system.source_terms()
    N = A.shape[0]
    U = np.empty((N, system.n))
    U[0] = U_left
    for i in range(N - 1):
        At = 0.5 * (A[i] + A[i + 1])
        lhs = At - 0.5 * dx * G[i + 1]
        rhs = At @ U[i] + 0.5 * dx * (s0[i] + s0[i + 1] + G[i] @ U[i])
        U[i + 1] = solve(lhs, rhs)
    return U


def balance_residual(system, U, dx: float) -> np.ndarray:
    """max-norm of A~ dU - dV per interior interface."""
    A = system.coefficient_matrices()
    S = system.source(U)
    At = 0.5 * (A[:-1] + A[1:])
    r = np.einsum("...ij,...j->...i", At, U[1:] - U[:-1]) - interface_source_integrals(S, dx)
    return np.max(np.abs(r), axis=-1)
