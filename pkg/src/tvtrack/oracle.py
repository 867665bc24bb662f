"""Ground truth: high-precision optimizer trajectory and continuous flow.

The oracle solves grad f(x; t) = 0 by safeguarded Newton to a residual
around machine precision, at least two orders below the smallest error
floor the solvers can exhibit, so measured tracking errors are not
polluted. It also integrates the residual-preserving dynamics with a
fixed-step classical Runge-Kutta scheme to measure the one-period
discretization error of the Euler prediction.
"""

from __future__ import annotations

import numpy as np

from .errors import NoConvergence
from .linalg import spd_solve
from .objective import TimeVaryingObjective

ORACLE_TOL = 1e-13


def optimal_point(obj: TimeVaryingObjective, t: float,
                  warm_start: np.ndarray | None = None,
                  max_iter: int = 200) -> np.ndarray:
    """Minimizer of f(.; t) via damped Newton with residual polishing.

    Steps are halved while they increase the gradient norm, which gives
    global convergence on strongly convex objectives from any start.
    """
    x = np.zeros(obj.dim) if warm_start is None else np.asarray(warm_start, float).copy()
    g = obj.gradient(x, t)
    gn = float(np.linalg.norm(g))
    tol = ORACLE_TOL * max(1.0, gn)
    for _ in range(max_iter):
        if gn <= tol:
            # polish toward machine precision so re-solving from the
            # result is a no-op
            for _ in range(3):
                step = spd_solve(obj.hessian(x, t), g)
                cand = x - step
                gc = obj.gradient(cand, t)
                gcn = float(np.linalg.norm(gc))
                if gcn >= gn:
                    break
                x, g, gn = cand, gc, gcn
            return x
        step = spd_solve(obj.hessian(x, t), g)
        lam = 1.0
        while lam > 1e-12:
            cand = x - lam * step
            gc = obj.gradient(cand, t)
            gcn = float(np.linalg.norm(gc))
            if gcn < gn:
                x, g, gn = cand, gc, gcn
                break
            lam *= 0.5
        else:
            raise NoConvergence(f"damping stalled at |grad| = {gn:.3e}")
    raise NoConvergence(f"no convergence in {max_iter} iterations, |grad| = {gn:.3e}")


def optimal_trajectory(obj: TimeVaryingObjective, t0: float, h: float,
                       K: int) -> np.ndarray:
    """x*(t_k) for k = 0..K, shape (K+1, dim), warm-starting each solve."""
    out = np.empty((K + 1, obj.dim))
    x = None
    for k in range(K + 1):
        x = optimal_point(obj, t0 + k * h, warm_start=x)
        out[k] = x
    return out


def continuous_flow(obj: TimeVaryingObjective, x_start: np.ndarray,
                    t_start: float, h: float, substeps: int = 100) -> np.ndarray:
    """Integrate xdot = -hess^{-1} mixed_tx from (x_start, t_start) over h.

    Classical fixed-step 4th-order Runge-Kutta; the result is the exact
    prediction against which the Euler step's one-period error is measured.
    """
    if obj.mixed_tx is None:
        raise ValueError("continuous flow needs mixed_tx")

    def rhs(x, t):
        return -spd_solve(obj.hessian(x, t), obj.mixed_tx(x, t))

    dt = h / substeps
    x = np.asarray(x_start, float).copy()
    t = t_start
    for _ in range(substeps):
        k1 = rhs(x, t)
        k2 = rhs(x + 0.5 * dt * k1, t + 0.5 * dt)
        k3 = rhs(x + 0.5 * dt * k2, t + 0.5 * dt)
        k4 = rhs(x + dt * k3, t + dt)
        x = x + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        t += dt
    return x
