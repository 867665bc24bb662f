"""Time-varying objectives f(x; t) and their derivative bundle.

An objective exposes callables for the value, the gradient and Hessian in
x, and (optionally) the first and second time derivatives of the gradient.
Algorithms that do not know the time variation fall back to the
first-order backward difference in :func:`fd_time_gradient`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import linalg
from .errors import DegenerateInterval, MissingConstants


@dataclass(frozen=True)
class SmoothnessConstants:
    """Curvature and time-variation bounds that drive every error bound.

    m and L bracket the Hessian spectrum, c0 bounds the gradient's time
    derivative, c1 the third x-derivative (Hessian Lipschitz constant),
    c2 the mixed x/t second derivative of the gradient and c3 its second
    time derivative.
    """

    m: float
    L: float
    c0: float
    c1: float
    c2: float
    c3: float

    def __post_init__(self):
        if not (0 < self.m <= self.L):
            raise ValueError(f"need 0 < m <= L, got m={self.m}, L={self.L}")
        for name in ("c0", "c1", "c2", "c3"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")


@dataclass(frozen=True)
class TimeVaryingObjective:
    """Callable bundle for f(x; t) and the derivatives the solvers need.

    Evaluators must be pure; objectives are safe to share across threads.
    ``mixed_tx`` (time derivative of the gradient) is required by the
    exact-prediction algorithms and optional otherwise; ``mixed_ttx`` is
    only used by assumption checking.
    """

    dim: int
    value: Callable[[np.ndarray, float], float]
    gradient: Callable[[np.ndarray, float], np.ndarray]
    hessian: Callable[[np.ndarray, float], np.ndarray]
    mixed_tx: Callable[[np.ndarray, float], np.ndarray] | None = None
    mixed_ttx: Callable[[np.ndarray, float], np.ndarray] | None = None
    constants: SmoothnessConstants | None = None


def fd_time_gradient(obj: TimeVaryingObjective, x: np.ndarray, t: float,
                     t_prev: float) -> np.ndarray:
    """First-order backward difference of the gradient in time.

    Returns (grad(x; t) - grad(x; t_prev)) / (t - t_prev), the estimate of
    the gradient's time derivative available without knowing the objective's
    time variation. Its error is bounded by (t - t_prev) * c3 / 2.
    """
    dt = t - t_prev
    if dt < 1e-12:
        raise DegenerateInterval(f"time interval {dt:.3e} too small")
    return (obj.gradient(x, t) - obj.gradient(x, t_prev)) / dt


@dataclass(frozen=True)
class AssumptionReport:
    """Worst sampled margin for each claimed constant (negative = violated)."""

    m: float
    L: float
    c0: float
    c1: float
    c2: float
    c3: float
    n_samples: int = 0

    @property
    def ok(self) -> bool:
        return min(self.m, self.L, self.c0, self.c1, self.c2, self.c3) >= 0.0

    def as_dict(self) -> dict:
        return {
            "m": self.m, "L": self.L, "c0": self.c0,
            "c1": self.c1, "c2": self.c2, "c3": self.c3,
        }


_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29)


def halton(n_points: int, dim: int) -> np.ndarray:
    """Deterministic low-discrepancy points in the unit cube."""
    if dim > len(_PRIMES):
        raise ValueError(f"halton supports at most {len(_PRIMES)} dimensions")
    out = np.empty((n_points, dim))
    for j in range(dim):
        base = _PRIMES[j]
        for i in range(n_points):
            f, r, k = 1.0, 0.0, i + 1
            while k > 0:
                f /= base
                r += f * (k % base)
                k //= base
            out[i, j] = r
    return out


def _tensor_norm_fd(obj, x, t, step=1e-5, n_dirs=360):
    """Operator norm of the third x-derivative, estimated from Hessian
    differences along coordinate axes."""
    n = obj.dim
    slices = []
    for i in range(n):
        e = np.zeros(n)
        e[i] = step
        slices.append((obj.hessian(x + e, t) - obj.hessian(x - e, t)) / (2 * step))
    if n == 1:
        return abs(float(slices[0][0, 0]))
    if n == 2:
        best = 0.0
        for theta in np.linspace(0.0, np.pi, n_dirs, endpoint=False):
            mat = np.cos(theta) * slices[0] + np.sin(theta) * slices[1]
            lo, hi = linalg.eig_bounds(0.5 * (mat + mat.T))
            best = max(best, abs(lo), abs(hi))
        return best
    dirs = 2.0 * halton(128, n) - 1.0
    best = 0.0
    for d in dirs:
        nd = np.linalg.norm(d)
        if nd == 0:
            continue
        d = d / nd
        mat = sum(d[i] * slices[i] for i in range(n))
        lo, hi = linalg.eig_bounds(0.5 * (mat + mat.T))
        best = max(best, abs(lo), abs(hi))
    return best


def check_assumptions(obj: TimeVaryingObjective, x_box, t_span,
                      n_samples: int = 512) -> AssumptionReport:
    """Sample derivative norms over a box in (x, t) and report margins.

    ``x_box`` is a sequence of (lo, hi) pairs, one per coordinate, and
    ``t_span`` a (t0, t1) pair. Margins compare the claimed constants
    against the sampled extremes: nonnegative margins mean the claims
    held everywhere we looked. The sample set is a fixed low-discrepancy
    sequence so reports are reproducible.
    """
    if obj.constants is None:
        raise MissingConstants("objective has no smoothness constants attached")
    c = obj.constants
    x_box = [(float(lo), float(hi)) for lo, hi in x_box]
    if len(x_box) != obj.dim:
        raise ValueError(f"x_box has {len(x_box)} coordinates, dim is {obj.dim}")
    t0, t1 = float(t_span[0]), float(t_span[1])
    if not (t1 > t0) or any(hi <= lo for lo, hi in x_box):
        raise ValueError("sample region is empty")

    pts = halton(n_samples, obj.dim + 1)
    lam_min, lam_max = np.inf, -np.inf
    max_tx = max_c1 = max_c2 = max_ttx = 0.0
    dt_fd = max(1e-6, 1e-7 * (t1 - t0))
    for p in pts:
        x = np.array([lo + (hi - lo) * p[i] for i, (lo, hi) in enumerate(x_box)])
        t = t0 + (t1 - t0) * p[-1]
        hess = obj.hessian(x, t)
        lo_e, hi_e = linalg.eig_bounds(hess)
        lam_min, lam_max = min(lam_min, lo_e), max(lam_max, hi_e)

        if obj.mixed_tx is not None:
            tx = obj.mixed_tx(x, t)
        else:
            tx = (obj.gradient(x, t + dt_fd) - obj.gradient(x, t - dt_fd)) / (2 * dt_fd)
        max_tx = max(max_tx, float(np.linalg.norm(tx)))

        max_c1 = max(max_c1, _tensor_norm_fd(obj, x, t))

        hess_dot = (obj.hessian(x, t + dt_fd) - obj.hessian(x, t - dt_fd)) / (2 * dt_fd)
        lo_e, hi_e = linalg.eig_bounds(0.5 * (hess_dot + hess_dot.T))
        max_c2 = max(max_c2, abs(lo_e), abs(hi_e))

        if obj.mixed_ttx is not None:
            ttx = obj.mixed_ttx(x, t)
        else:
            ttx = (obj.gradient(x, t + dt_fd) - 2 * obj.gradient(x, t)
                   + obj.gradient(x, t - dt_fd)) / dt_fd**2
        max_ttx = max(max_ttx, float(np.linalg.norm(ttx)))

    return AssumptionReport(
        m=lam_min - c.m,
        L=c.L - lam_max,
        c0=c.c0 - max_tx,
        c1=c.c1 - max_c1,
        c2=c.c2 - max_c2,
        c3=c.c3 - max_ttx,
        n_samples=n_samples,
    )
