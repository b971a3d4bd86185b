"""Hyperbolic (Cattaneo) heat equation

    u_t + r q_x = r phi,      eps q_t + k u_x = -q,      r = 1 / (c rho).
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import ConfigurationError
from ..linalg import EigenDecomposition
from .base import Augmentation, SystemModel, offdiag_eigen

#: (1 - 2^-1/2) / (2^1/2 - 1), which simplifies to 2^-1/2
K1 = (1.0 - 2.0**-0.5) / (2.0**0.5 - 1.0)


def epsilon_for(dx: float, safety: float = 1.0) -> float:
    """Relaxation time eps = safety * dx / K1 for a first-order scheme."""
    if not dx > 0:
        raise ConfigurationError(f"dx must be positive, got {dx}")
    if not safety > 0:
        raise ConfigurationError("safety must be positive (eps -> 0 is the parabolic limit)")
    return safety * dx / K1


class HeatModel(SystemModel):
    n = 2
    names = ("u", "q")
    param_names = ("k", "r", "eps", "phi")
    positive = ("k", "r", "eps")

    def coefficient_matrices(self):
        A = np.zeros((self.N, 2, 2))
        A[:, 0, 1] = self.r
        A[:, 1, 0] = self.k / self.eps
        return A

    def source_terms(self):
        s0 = np.zeros((self.N, 2))
        s0[:, 0] = self.r * self.phi
        G = np.zeros((self.N, 2, 2))
        G[:, 1, 1] = -1.0 / self.eps
        return s0, G

    def eigen(self, A):
        A = np.asarray(A, dtype=float)
        if np.any(A[..., 0, 0] != 0) or np.any(A[..., 1, 1] != 0):
            raise ConfigurationError("heat matrix must have a zero diagonal")
        return offdiag_eigen(A[..., 0, 1], A[..., 1, 0])

    def augmentation(self, reduced: bool = True) -> Augmentation:
        """Reduced form appends only the conductivity: U_bar = [u, q, k]."""
        if not reduced:
            return self.full_augmentation()
        for name in ("r", "eps"):
            v = self.params[name]
            if np.any(v != v[0]):
                raise ConfigurationError(
                    f"reduced heat augmentation needs uniform {name}; use reduced=False"
                )
        r, eps = self.r[0], self.eps[0]
        A0 = np.zeros((self.N, 2, 2))
        A0[:, 0, 1] = r
        basis = np.zeros((1, 2, 2))
        basis[0, 1, 0] = 1.0 / eps
        return HeatAugmentation(self, self.k[:, None].copy(), A0, basis, ("k",))


def heat_model(k, r=1.0, eps=1.0, phi=0.0) -> HeatModel:
    return HeatModel(k=k, r=r, eps=eps, phi=phi)


def heat_augmented_eigen(k, r, eps, u) -> EigenDecomposition:
    """Closed-form eigenstructure of [[0, r, 0], [k/eps, 0, u/eps], [0, 0, 0]].

    Columns ordered by eigenvalue: -sqrt(k r/eps), 0, +sqrt(k r/eps).
    The zero-wave eigenvector is [-u/k, 0, 1].
    """
    k, r, eps, u = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (k, r, eps, u)))
    s = np.sqrt(eps * r / k)
    w = np.sqrt(k / (eps * r))
    c = np.sqrt(k * r / eps)
    v = u / np.sqrt(eps * k * r)
    shape = k.shape
    lam = np.stack([-c, np.zeros(shape), c], axis=-1)
    P = np.zeros(shape + (3, 3))
    P[..., 0, 0] = -s
    P[..., 0, 1] = -u / k
    P[..., 0, 2] = s
    P[..., 1, 0] = 1.0
    P[..., 1, 2] = 1.0
    P[..., 2, 1] = 1.0
    Pinv = np.zeros(shape + (3, 3))
    Pinv[..., 0, :] = np.stack([-0.5 * w, np.full(shape, 0.5), -0.5 * v], axis=-1)
    Pinv[..., 1, 2] = 1.0
    Pinv[..., 2, :] = np.stack([0.5 * w, np.full(shape, 0.5), 0.5 * v], axis=-1)
    return EigenDecomposition(lam, P, Pinv)


class HeatAugmentation(Augmentation):
    """[u, q, k] augmentation using the closed-form eigenvectors above."""

    def eigen(self, A_tilde, B_tilde) -> EigenDecomposition:
        r = A_tilde[..., 0, 1]
        eps = 1.0 / self.basis[0, 1, 0]
        k = A_tilde[..., 1, 0] * eps
        u = B_tilde[..., 1, 0] * eps
        return heat_augmented_eigen(k, r, eps, u)


def heat_wave_speed(k, r, eps) -> float:
    return math.sqrt(k * r / eps)
