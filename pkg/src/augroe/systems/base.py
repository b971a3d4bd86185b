"""Common machinery for linear systems  U_t + A(x) U_x = S(U)  with
cell-sampled coefficients and affine sources  S = s0 + G U."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, ClassVar, Mapping, Union

import numpy as np

from ..errors import ConfigurationError
from ..linalg import EigenDecomposition, inv, matmul

Profile = Union[float, Callable[[np.ndarray], np.ndarray], np.ndarray]


def sample_profile(profile: Profile, x: np.ndarray) -> np.ndarray:
    """Evaluate a medium profile at cell centres ``x``."""
    if callable(profile):
        values = np.broadcast_to(np.asarray(profile(x), dtype=float), x.shape)
    else:
        values = np.broadcast_to(np.asarray(profile, dtype=float), x.shape)
    return np.array(values, dtype=float)


def piecewise(x_jump: float, left: float, right: float) -> Callable[[np.ndarray], np.ndarray]:
    """Two constant values separated at ``x_jump`` (the jump value goes right)."""

    def f(x):
        return np.where(np.asarray(x) < x_jump, left, right)

    f.__doc__ = f"{left} for x < {x_jump}, {right} otherwise"
    return f


def offdiag_eigen(a, b) -> EigenDecomposition:
    """Closed form for [[0, a], [b, 0]] with a, b > 0.

    lambda = -+sqrt(a b); eigenvectors [-+Z, 1] with Z = sqrt(a / b).
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if np.any(~(a > 0)) or np.any(~(b > 0)):
        raise ConfigurationError("off-diagonal entries must be positive for hyperbolicity")
    c = np.sqrt(a * b)
    Z = np.sqrt(a / b)
    shape = a.shape
    lam = np.stack([-c, c], axis=-1)
    P = np.empty(shape + (2, 2))
    P[..., 0, 0] = -Z
    P[..., 0, 1] = Z
    P[..., 1, 0] = 1.0
    P[..., 1, 1] = 1.0
    Pinv = np.empty(shape + (2, 2))
    Pinv[..., 0, 0] = -0.5 / Z
    Pinv[..., 0, 1] = 0.5
    Pinv[..., 1, 0] = 0.5 / Z
    Pinv[..., 1, 1] = 0.5
    return EigenDecomposition(lam, P, Pinv)


@dataclass(frozen=True)
class Augmentation:
    """Coefficients promoted to conserved variables for the flux form.

    ``A(theta) = A0 + sum_p theta_p * basis[p]``; ``theta`` has one column per
    augmented coefficient. ``system`` supplies the eigenstructure of the
    physical block.
    """

    system: "SystemModel"
    theta: np.ndarray  # (N, m)
    A0: np.ndarray  # (N, n, n)
    basis: np.ndarray  # (m, n, n)
    theta_names: tuple[str, ...]

    @property
    def n(self) -> int:
        return self.A0.shape[-1]

    @property
    def m(self) -> int:
        return self.basis.shape[0]

    def matrix(self, theta, A0=None):
        A0 = self.A0 if A0 is None else A0
        return A0 + np.einsum("...p,pij->...ij", theta, self.basis)

    def B(self, U):
        """d(A U)/d theta: shape (..., n, m)."""
        return np.einsum("pij,...j->...ip", self.basis, U)

    def extended(self) -> "Augmentation":
        pad = lambda a: np.concatenate([a[:1], a, a[-1:]], axis=0)  # noqa: E731
        return replace(
            self, system=self.system.extended(), theta=pad(self.theta), A0=pad(self.A0)
        )

    def eigen(self, A_tilde, B_tilde) -> EigenDecomposition:
        """Eigenstructure of [[A~, B~], [0, 0]] from the block structure.

        Physical waves keep the eigenvectors of A~ (padded with zeros); each
        zero wave p has eigenvector [-A~^{-1} B~ e_p ; e_p].
        """
        n, m = self.n, self.m
        d = self.system.eigen(A_tilde)
        X = -matmul(inv(A_tilde), B_tilde)  # (..., n, m)
        PinvX = matmul(d.Pinv, X)
        batch = A_tilde.shape[:-2]
        size = n + m
        lam = np.concatenate([d.lambdas, np.zeros(batch + (m,))], axis=-1)
        P = np.zeros(batch + (size, size))
        P[..., :n, :n] = d.P
        P[..., :n, n:] = X
        P[..., n:, n:] = np.eye(m)
        Pinv = np.zeros(batch + (size, size))
        Pinv[..., :n, :n] = d.Pinv
        Pinv[..., :n, n:] = -PinvX
        Pinv[..., n:, n:] = np.eye(m)
        order = np.argsort(lam[(0,) * len(batch)], kind="stable")
        return EigenDecomposition(lam[..., order], P[..., :, order], Pinv[..., order, :])


class SystemModel:
    """Base class; subclasses define the coefficient matrix and source."""

    n: ClassVar[int]
    names: ClassVar[tuple[str, ...]]
    param_names: ClassVar[tuple[str, ...]]
    positive: ClassVar[tuple[str, ...]] = ()

    def __init__(self, **params):
        missing = set(self.param_names) - set(params)
        extra = set(params) - set(self.param_names)
        if missing or extra:
            raise ConfigurationError(
                f"{type(self).__name__}: missing {sorted(missing)}, unexpected {sorted(extra)}"
            )
        arrays = {k: np.atleast_1d(np.asarray(v, dtype=float)) for k, v in params.items()}
        N = max(a.shape[0] for a in arrays.values())
        for k, v in arrays.items():
            if v.ndim != 1 or v.shape[0] not in (1, N):
                raise ConfigurationError(f"parameter {k} has shape {v.shape}, expected ({N},)")
            arrays[k] = np.broadcast_to(v, (N,)).copy()
            if not np.all(np.isfinite(arrays[k])):
                raise ConfigurationError(f"parameter {k} has non-finite samples")
            if k in self.positive and np.any(arrays[k] <= 0):
                raise ConfigurationError(f"parameter {k} must be strictly positive")
        self.params: Mapping[str, np.ndarray] = arrays
        self.N = N

    @classmethod
    def from_profiles(cls, x: np.ndarray, **profiles: Profile):
        return cls(**{k: sample_profile(p, x) for k, p in profiles.items()})

    def __getattr__(self, name):
        params = self.__dict__.get("params")
        if params is not None and name in params:
            return params[name]
        raise AttributeError(name)

    def extended(self):
        """Same model with one ghost cell per side copying the edge medium."""
        return type(self)(
            **{k: np.concatenate([v[:1], v, v[-1:]]) for k, v in self.params.items()}
        )

    def coefficient_matrices(self) -> np.ndarray:
        raise NotImplementedError

    def source_terms(self) -> tuple[np.ndarray, np.ndarray]:
        """(s0, G) with S(U) = s0 + G U per cell."""
        raise NotImplementedError

    def source(self, U) -> np.ndarray:
        s0, G = self.source_terms()
        return s0 + np.einsum("...ij,...j->...i", G, U)

    def eigen(self, A) -> EigenDecomposition:
        raise NotImplementedError

    def eigen_cells(self) -> EigenDecomposition:
        return self.eigen(self.coefficient_matrices())

    def max_speed(self) -> float:
        """max |lambda| over cells and arithmetic interface averages."""
        A = self.coefficient_matrices()
        lam_c = self.eigen(A).lambdas
        lam_i = self.eigen(0.5 * (A[1:] + A[:-1])).lambdas if self.N > 1 else lam_c
        return float(max(np.max(np.abs(lam_c)), np.max(np.abs(lam_i))))

    def augmentation(self, reduced: bool = True) -> Augmentation:
        return self.full_augmentation()

    def full_augmentation(self) -> Augmentation:
        """Every entry of A becomes a conserved variable (row-major)."""
        n = self.n
        A = self.coefficient_matrices()
        basis = np.zeros((n * n, n, n))
        for p in range(n * n):
            basis[p, p // n, p % n] = 1.0
        names = tuple(f"a{i + 1}{j + 1}" for i in range(n) for j in range(n))
        return Augmentation(self, A.reshape(self.N, n * n), np.zeros_like(A), basis, names)
