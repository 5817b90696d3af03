"""Extreme eigenvalues of small Gram matrices by cyclic Jacobi rotations."""

from __future__ import annotations

import math
from typing import Optional, Tuple

import numpy as np

from ricbounds.core.errors import DomainError, NonConvergenceError
from ricbounds.core.settings import get_settings


def gram_matrix(columns: np.ndarray) -> np.ndarray:
    """A_K^T A_K, symmetrized so later rotations see an exactly symmetric matrix."""
    g = columns.T @ columns
    return 0.5 * (g + g.T)


def _off_norm(a: np.ndarray) -> float:
    upper = np.triu(a, 1)
    return math.sqrt(2.0 * float(np.sum(upper * upper)))


def jacobi_eigenvalues(
    a: np.ndarray,
    tolerance: Optional[float] = None,
    max_sweeps: Optional[int] = None,
) -> np.ndarray:
    """Eigenvalues of a symmetric matrix, unsorted."""
    settings = get_settings()
    tol = settings.jacobi_tolerance if tolerance is None else tolerance
    sweeps = settings.jacobi_max_sweeps if max_sweeps is None else max_sweeps

    a = np.array(a, dtype=np.float64, copy=True)
    k = a.shape[0]
    scale = float(np.linalg.norm(a))
    if k == 1 or scale == 0.0:
        return np.diag(a).copy()
    threshold = tol * scale

    for _ in range(sweeps):
        if _off_norm(a) <= threshold:
            return np.diag(a).copy()
        for p in range(k - 1):
            for q in range(p + 1, k):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 1.0 / (2.0 * theta)
                else:
                    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c

                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = a[q, p] = 0.0

    if _off_norm(a) <= threshold:
        return np.diag(a).copy()
    raise NonConvergenceError(f"Jacobi iteration did not converge in {sweeps} sweeps")


def gram_extremes(
    columns: np.ndarray,
    tolerance: Optional[float] = None,
    max_sweeps: Optional[int] = None,
) -> Tuple[float, float]:
    """(lambda_min, lambda_max) of A_K^T A_K for an n x k column block."""
    if columns.ndim != 2 or columns.shape[1] < 1:
        raise DomainError("columns must be a 2-D array with at least one column")
    if columns.shape[1] > columns.shape[0]:
        raise DomainError(f"need k <= n, got a {columns.shape[0]}x{columns.shape[1]} block")
    if columns.shape[1] == 1:
        norm_sq = float(columns[:, 0] @ columns[:, 0])
        return norm_sq, norm_sq
    eigenvalues = jacobi_eigenvalues(gram_matrix(columns), tolerance, max_sweeps)
    return float(eigenvalues.min()), float(eigenvalues.max())
