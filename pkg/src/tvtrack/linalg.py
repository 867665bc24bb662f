"""Minimal dense linear algebra for small symmetric systems.

Vectors are 1-D float ndarrays, symmetric matrices 2-D float ndarrays.
Everything here is sized for the n <= 10 problems this package tracks;
there is no attempt at large-scale performance.
"""

from __future__ import annotations

import numpy as np

from .errors import NotPositiveDefinite

# Pivot threshold below which a factorization is treated as a violated
# strong-convexity assumption instead of being regularized.
EPS_SPD = 1e-10

SYM_RTOL = 1e-12


def as_vector(x, n: int | None = None) -> np.ndarray:
    v = np.asarray(x, dtype=float)
    if v.ndim == 0:
        v = v.reshape(1)
    if v.ndim != 1:
        raise ValueError(f"expected a vector, got shape {v.shape}")
    if n is not None and v.shape[0] != n:
        raise ValueError(f"expected length {n}, got {v.shape[0]}")
    return v


def check_symmetric(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    scale = max(1.0, float(np.abs(a).max()))
    if float(np.abs(a - a.T).max()) > SYM_RTOL * scale:
        raise ValueError("matrix is not symmetric to within tolerance")
    return a


def cholesky(a: np.ndarray) -> np.ndarray:
    """Lower-triangular factor L with A = L L^T.

    Raises NotPositiveDefinite when a pivot falls below EPS_SPD.
    """
    a = np.asarray(a, dtype=float)
    n = a.shape[0]
    low = np.zeros((n, n))
    for j in range(n):
        d = a[j, j] - low[j, :j] @ low[j, :j]
        if d < EPS_SPD:
            raise NotPositiveDefinite(
                f"pivot {d:.3e} below {EPS_SPD:.0e} at row {j}"
            )
        low[j, j] = np.sqrt(d)
        if j + 1 < n:
            low[j + 1 :, j] = (a[j + 1 :, j] - low[j + 1 :, :j] @ low[j, :j]) / low[j, j]
    return low


def spd_solve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve A y = b for symmetric positive definite A."""
    n = len(b)
    if n == 1:
        d = a[0, 0]
        if d < EPS_SPD:
            raise NotPositiveDefinite(f"pivot {d:.3e} below {EPS_SPD:.0e}")
        return np.array([b[0] / d])
    if n == 2:
        # explicit 2x2 elimination, pivots are the Cholesky pivots
        a00, a01, a11 = a[0, 0], a[0, 1], a[1, 1]
        if a00 < EPS_SPD:
            raise NotPositiveDefinite(f"pivot {a00:.3e} below {EPS_SPD:.0e}")
        d1 = a11 - a01 * a01 / a00
        if d1 < EPS_SPD:
            raise NotPositiveDefinite(f"pivot {d1:.3e} below {EPS_SPD:.0e}")
        y1 = (b[1] - a01 * b[0] / a00) / d1
        y0 = (b[0] - a01 * y1) / a00
        return np.array([y0, y1])
    low = cholesky(a)
    z = np.empty(n)
    for i in range(n):
        z[i] = (b[i] - low[i, :i] @ z[:i]) / low[i, i]
    y = np.empty(n)
    for i in range(n - 1, -1, -1):
        y[i] = (z[i] - low[i + 1 :, i] @ y[i + 1 :]) / low[i, i]
    return y


def eig_bounds(a: np.ndarray) -> tuple[float, float]:
    """(smallest, largest) eigenvalue of a symmetric matrix."""
    n = a.shape[0]
    if n == 1:
        v = float(a[0, 0])
        return v, v
    if n == 2:
        tr = a[0, 0] + a[1, 1]
        det = a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]
        disc = np.sqrt(max(tr * tr / 4 - det, 0.0))
        return float(tr / 2 - disc), float(tr / 2 + disc)
    w = np.linalg.eigvalsh(a)
    return float(w[0]), float(w[-1])
