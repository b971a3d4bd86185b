"""Small dense vector/matrix helpers for n = 2, 3 systems.

Every routine accepts a single matrix/vector or a stack of them (leading
batch axes), so the solvers can process all interfaces of a grid at once.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class SingularMatrix(ArithmeticError):
    """Raised when a matrix is too close to singular to be inverted."""

    def __init__(self, det, message: str = "matrix is numerically singular"):
        self.det = det
        super().__init__(f"{message} (|det| = {np.min(np.abs(det)):.3e})")


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenvalues (ascending) with right eigenvectors as columns of ``P``.

    Column ``m`` of ``P`` pairs with ``lambdas[..., m]``. Arrays may carry
    leading batch axes.
    """

    lambdas: np.ndarray
    P: np.ndarray
    Pinv: np.ndarray

    @property
    def n(self) -> int:
        return self.lambdas.shape[-1]

    def reconstruct(self) -> np.ndarray:
        return np.einsum("...ij,...j,...jk->...ik", self.P, self.lambdas, self.Pinv)


def _check_square(A):
    if A.ndim < 2 or A.shape[-1] != A.shape[-2]:
        raise ValueError(f"expected square matrix, got shape {A.shape}")


def matvec(A, v):
    A = np.asarray(A, dtype=float)
    v = np.asarray(v, dtype=float)
    _check_square(A)
    if A.shape[-1] != v.shape[-1]:
        raise ValueError(f"dimension mismatch: {A.shape} @ {v.shape}")
    return np.einsum("...ij,...j->...i", A, v)


def matmul(A, B):
    return np.einsum("...ij,...jk->...ik", A, B)


def inf_norm(A) -> np.ndarray:
    """Maximum absolute row sum (vector: maximum absolute entry)."""
    A = np.asarray(A, dtype=float)
    if A.ndim == 1:
        return np.max(np.abs(A))
    return np.max(np.sum(np.abs(A), axis=-1), axis=-1)


def det2(A):
    return A[..., 0, 0] * A[..., 1, 1] - A[..., 0, 1] * A[..., 1, 0]


def det3(A):
    return (
        A[..., 0, 0] * (A[..., 1, 1] * A[..., 2, 2] - A[..., 1, 2] * A[..., 2, 1])
        - A[..., 0, 1] * (A[..., 1, 0] * A[..., 2, 2] - A[..., 1, 2] * A[..., 2, 0])
        + A[..., 0, 2] * (A[..., 1, 0] * A[..., 2, 1] - A[..., 1, 1] * A[..., 2, 0])
    )


def _guard(A, det, n):
    scale = inf_norm(A) ** n
    bad = ~(np.abs(det) > 1e-14 * scale)
    if np.any(bad):
        raise SingularMatrix(np.asarray(det)[bad] if np.ndim(det) else det)


def inv2(A):
    A = np.asarray(A, dtype=float)
    det = det2(A)
    _guard(A, det, 2)
    out = np.empty_like(A)
    out[..., 0, 0] = A[..., 1, 1]
    out[..., 0, 1] = -A[..., 0, 1]
    out[..., 1, 0] = -A[..., 1, 0]
    out[..., 1, 1] = A[..., 0, 0]
    return out / det[..., None, None]


def inv3(A):
    A = np.asarray(A, dtype=float)
    det = det3(A)
    _guard(A, det, 3)
    a = A
    cof = np.empty_like(A)
    cof[..., 0, 0] = a[..., 1, 1] * a[..., 2, 2] - a[..., 1, 2] * a[..., 2, 1]
    cof[..., 0, 1] = a[..., 0, 2] * a[..., 2, 1] - a[..., 0, 1] * a[..., 2, 2]
    cof[..., 0, 2] = a[..., 0, 1] * a[..., 1, 2] - a[..., 0, 2] * a[..., 1, 1]
    cof[..., 1, 0] = a[..., 1, 2] * a[..., 2, 0] - a[..., 1, 0] * a[..., 2, 2]
    cof[..., 1, 1] = a[..., 0, 0] * a[..., 2, 2] - a[..., 0, 2] * a[..., 2, 0]
    cof[..., 1, 2] = a[..., 0, 2] * a[..., 1, 0] - a[..., 0, 0] * a[..., 1, 2]
    cof[..., 2, 0] = a[..., 1, 0] * a[..., 2, 1] - a[..., 1, 1] * a[..., 2, 0]
    cof[..., 2, 1] = a[..., 0, 1] * a[..., 2, 0] - a[..., 0, 0] * a[..., 2, 1]
    cof[..., 2, 2] = a[..., 0, 0] * a[..., 1, 1] - a[..., 0, 1] * a[..., 1, 0]
    return cof / det[..., None, None]


def inv(A):
    A = np.asarray(A, dtype=float)
    _check_square(A)
    n = A.shape[-1]
    if n == 2:
        return inv2(A)
    if n == 3:
        return inv3(A)
    # larger systems only occur for the full n + n^2 augmentation checks
    det = np.linalg.det(A)
    _guard(A, det, n)
    return np.linalg.inv(A)


def solve2x2(A, b):
    """Solve ``A x = b`` by Cramer's rule (batched)."""
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    if A.shape[-2:] != (2, 2) or b.shape[-1] != 2:
        raise ValueError(f"solve2x2 needs 2x2 systems, got {A.shape}, {b.shape}")
    return matvec(inv2(A), b)


def solve3x3(A, b):
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    if A.shape[-2:] != (3, 3) or b.shape[-1] != 3:
        raise ValueError(f"solve3x3 needs 3x3 systems, got {A.shape}, {b.shape}")
    return matvec(inv3(A), b)


def solve(A, b):
    A = np.asarray(A, dtype=float)
    n = A.shape[-1]
    if n == 2:
        return solve2x2(A, b)
    if n == 3:
        return solve3x3(A, b)
    return matvec(inv(A), b)


def validate_decomposition(A, d: EigenDecomposition) -> tuple[float, float]:
    """Return (reconstruction residual, P*Pinv - I residual) in the inf-norm.

    Both are maxima over any batch axes; thresholds are the caller's business.
    """
    A = np.asarray(A, dtype=float)
    recon = d.reconstruct() - A
    ident = matmul(d.P, d.Pinv) - np.eye(d.n)
    return float(np.max(inf_norm(recon))), float(np.max(inf_norm(ident)))


def check_finite(x, what: str = "value"):
    x = np.asarray(x)
    if not np.all(np.isfinite(x)):
        raise FloatingPointError(f"non-finite entries in {what}")
    return x
