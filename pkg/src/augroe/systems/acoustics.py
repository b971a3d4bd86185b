"""Linear acoustics  p_t + K u_x = 0,  u_t + p_x / rho = 0."""

from __future__ import annotations

import numpy as np

from ..errors import ConfigurationError
from .base import SystemModel, offdiag_eigen


class AcousticsModel(SystemModel):
    n = 2
    names = ("p", "u")
    param_names = ("K", "rho")
    positive = ("K", "rho")

    def coefficient_matrices(self):
        A = np.zeros((self.N, 2, 2))
        A[:, 0, 1] = self.K
        A[:, 1, 0] = 1.0 / self.rho
        return A

    def source_terms(self):
        return np.zeros((self.N, 2)), np.zeros((self.N, 2, 2))

    def eigen(self, A):
        A = np.asarray(A, dtype=float)
        if np.any(A[..., 0, 0] != 0) or np.any(A[..., 1, 1] != 0):
            raise ConfigurationError("acoustics matrix must have a zero diagonal")
        return offdiag_eigen(A[..., 0, 1], A[..., 1, 0])

    @property
    def sound_speed(self):
        return np.sqrt(self.K / self.rho)

    @property
    def impedance(self):
        return np.sqrt(self.K * self.rho)


def acoustics_model(K, rho) -> AcousticsModel:
    """Model from per-cell (or scalar) bulk modulus and density samples."""
    return AcousticsModel(K=K, rho=rho)


def acoustic_interface_coefficients(K1, rho1, K2, rho2) -> tuple[float, float]:
    """Pressure reflection and transmission coefficients for a wave going 1 -> 2."""
    for v in (K1, rho1, K2, rho2):
        if not v > 0:
            raise ConfigurationError("medium parameters must be positive")
    Z1 = np.sqrt(K1 * rho1)
    Z2 = np.sqrt(K2 * rho2)
    return float((Z2 - Z1) / (Z2 + Z1)), float(2.0 * Z2 / (Z1 + Z2))
