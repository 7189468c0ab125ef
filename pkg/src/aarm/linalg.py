"""Dense linear algebra helpers.

Matrices and vectors are plain ``numpy.ndarray`` objects of dtype float64.
Least-squares problems are solved through a Householder QR factorization
(LAPACK ``geqrf`` via :func:`numpy.linalg.qr`) followed by a triangular
back-substitution; the factorization can be kept and reused when only the
right-hand side changes, which is the common case inside the splitting
sweeps of the Bregman solvers.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import solve_triangular

__all__ = [
    "DimensionError",
    "RankDeficientError",
    "as_matrix",
    "as_vector",
    "matvec",
    "QRLeastSquares",
    "solve_least_squares",
]


class DimensionError(ValueError):
    """Raised when operand shapes are incompatible."""


class RankDeficientError(np.linalg.LinAlgError):
    """Raised when a least-squares matrix is numerically rank deficient.

    Attributes
    ----------
    pivot : float
        Smallest magnitude on the diagonal of the triangular factor.
    """

    def __init__(self, pivot: float, tol: float):
        self.pivot = float(pivot)
        self.tol = float(tol)
        super().__init__(
            f"matrix is rank deficient: smallest pivot {self.pivot:.3e} "
            f"<= tolerance {self.tol:.3e}"
        )


def as_vector(x, name: str = "vector") -> np.ndarray:
    v = np.asarray(x, dtype=float)
    if v.ndim != 1:
        raise DimensionError(f"{name} must be one-dimensional, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError(f"{name} contains non-finite entries")
    return v


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    A = np.asarray(a, dtype=float)
    if A.ndim != 2:
        raise DimensionError(f"{name} must be two-dimensional, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError(f"{name} contains non-finite entries")
    return A


def matvec(A, x) -> np.ndarray:
    """Matrix-vector product with an explicit shape check."""
    A = as_matrix(A, "A")
    x = as_vector(x, "x")
    if A.shape[1] != x.shape[0]:
        raise DimensionError(
            f"cannot multiply {A.shape[0]}x{A.shape[1]} matrix by vector of length {x.shape[0]}"
        )
    return A @ x


class QRLeastSquares:
    """Reusable least-squares solver for a fixed tall matrix.

    Parameters
    ----------
    A : array_like, shape (m, n)
        Coefficient matrix with ``m >= n`` and full column rank.
    rtol : float, optional
        Relative pivot tolerance. A diagonal entry of ``R`` with magnitude
        below ``rtol * max|R_ii|`` (or exactly zero) is treated as a rank
        deficiency. Defaults to ``max(m, n) * eps``.

    Raises
    ------
    RankDeficientError
        If the triangular factor has a pivot below tolerance.
    """

    def __init__(self, A, rtol: float | None = None):
        A = as_matrix(A, "A")
        m, n = A.shape
        if m < n:
            raise DimensionError(f"least squares needs rows >= cols, got {m}x{n}")
        self.shape = (m, n)
        self.Q, self.R = np.linalg.qr(A, mode="reduced")
        pivots = np.abs(np.diag(self.R))
        if rtol is None:
            rtol = max(m, n) * np.finfo(float).eps
        scale = pivots.max() if n else 0.0
        tol = rtol * scale
        self.min_pivot = float(pivots.min()) if n else np.inf
        if n and (self.min_pivot <= tol or scale == 0.0):
            raise RankDeficientError(self.min_pivot, tol)

    def solve(self, b) -> np.ndarray:
        b = as_vector(b, "b")
        if b.shape[0] != self.shape[0]:
            raise DimensionError(
                f"right-hand side has length {b.shape[0]}, expected {self.shape[0]}"
            )
        return solve_triangular(self.R, self.Q.T @ b, lower=False, check_finite=False)


def solve_least_squares(A, b) -> np.ndarray:
    """Return ``argmin_x ||A x - b||_2`` for a full-column-rank ``A``."""
    return QRLeastSquares(A).solve(b)
