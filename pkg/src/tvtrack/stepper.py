"""The two primitive moves: prediction and correction.

Prediction is one explicit Euler step along the dynamics that keep the
gradient residual constant as the objective drifts:

    xdot = -[hess f(x; t)]^{-1} d/dt grad f(x; t)

The time derivative of the gradient is either evaluated analytically or
replaced by a first-order backward difference. Correction is one or more
gradient descent or Newton steps on the freshly sampled objective.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import MissingDerivative, NonFinite
from .linalg import spd_solve
from .objective import TimeVaryingObjective


class PredictionMode(enum.Enum):
    EXACT_TIME_DERIVATIVE = "exact"
    BACKWARD_DIFFERENCE = "backward-difference"
    NO_PREDICTION = "none"


@dataclass(frozen=True)
class GradientCorrection:
    gamma: float

    def __post_init__(self):
        if self.gamma <= 0:
            raise ValueError("gamma must be positive")


@dataclass(frozen=True)
class NewtonCorrection:
    pass


CorrectionMode = GradientCorrection | NewtonCorrection


def predict(obj: TimeVaryingObjective, x: np.ndarray, t: float, h: float,
            mode: PredictionMode,
            prev_grad: np.ndarray | None = None) -> np.ndarray:
    """One Euler step of the residual-preserving dynamics over period h.

    In backward-difference mode ``prev_grad`` must be the gradient at the
    same point x but the previous sample time t - h.
    """
    if h <= 0:
        raise ValueError("sampling period must be positive")
    if mode is PredictionMode.NO_PREDICTION:
        return x.copy()
    if mode is PredictionMode.EXACT_TIME_DERIVATIVE:
        if obj.mixed_tx is None:
            raise MissingDerivative("exact prediction needs mixed_tx")
        d = obj.mixed_tx(x, t)
    else:
        if prev_grad is None:
            raise MissingDerivative("backward difference needs the previous-time gradient")
        d = (obj.gradient(x, t) - prev_grad) / h
    out = x - h * spd_solve(obj.hessian(x, t), d)
    if not np.isfinite(out).all():
        raise NonFinite("prediction produced a non-finite iterate")
    return out


def correct(obj: TimeVaryingObjective, x_init: np.ndarray, t: float,
            mode: CorrectionMode, tau: int,
            backtracking: bool = False) -> np.ndarray:
    """tau descent steps on f(.; t) starting from x_init.

    Pure fixed steps by default; ``backtracking`` halves a step while it
    does not decrease the objective value (off by default, matching the
    algorithms the error bounds describe).
    """
    if tau < 1:
        raise ValueError("tau must be at least 1")
    if isinstance(mode, GradientCorrection) and obj.constants is not None:
        if mode.gamma >= 2.0 / obj.constants.L:
            warnings.warn(
                f"stepsize {mode.gamma} >= 2/L = {2.0 / obj.constants.L:.4g}; "
                "contraction is not guaranteed",
                stacklevel=2,
            )
    x = x_init
    for _ in range(tau):
        if isinstance(mode, GradientCorrection):
            step = mode.gamma * obj.gradient(x, t)
        else:
            step = spd_solve(obj.hessian(x, t), obj.gradient(x, t))
        if backtracking:
            fx = obj.value(x, t)
            lam = 1.0
            while lam > 1e-8 and obj.value(x - lam * step, t) > fx:
                lam *= 0.5
            step = lam * step
        x = x - step
        if not np.isfinite(x).all():
            raise NonFinite("correction produced a non-finite iterate")
    return x
