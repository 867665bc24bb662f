"""Full solver drivers: prediction-correction variants, running baselines,
the gradient-then-Newton hybrid, actuation saturation, and computation
budgets.

Variant semantics
-----------------
GTT/NTT predict with the analytic time derivative of the gradient and
correct with gradient / Newton steps on the newly sampled objective.
AGT/ANT replace the time derivative by a backward difference of stored
gradients (prediction is skipped at the very first sample, where no
previous gradient exists). RG/RN are the running baselines: no
prediction, and the waypoint committed at each sample is computed from
the last *acquired* objective, so they always react one period late.
HYBRID runs gradient corrections until the gradient norm falls below
m c h^2 and then switches permanently to Newton corrections.

Under a :class:`BudgetSchedule` the per-sample correction count is
derived from evaluation costs, and each sample ends with one refinement
slot holding either the prediction for the next sample or extra
correction steps, mirroring a control loop with a fixed computation
allotment. In budget mode every variant corrects on the newly acquired
objective.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from . import oracle as oracle_mod
from .bounds import hybrid_constants
from .errors import Infeasible, InvalidHybridC, MissingDerivative, NonFinite
from .objective import TimeVaryingObjective
from .stepper import (CorrectionMode, GradientCorrection, NewtonCorrection,
                      PredictionMode, correct, predict)


class Variant(enum.Enum):
    GTT = "GTT"
    NTT = "NTT"
    AGT = "AGT"
    ANT = "ANT"
    RG = "RG"
    RN = "RN"
    HYBRID = "HYBRID"


_NEWTON_VARIANTS = {Variant.NTT, Variant.ANT, Variant.RN}
_EXACT_VARIANTS = {Variant.GTT, Variant.NTT, Variant.HYBRID}
_RUNNING_VARIANTS = {Variant.RG, Variant.RN}


class RefinementPolicy(enum.Enum):
    EXTRA_GRADIENTS = "extra-gradients"
    EXTRA_NEWTON = "extra-newton"
    PREDICTION = "prediction"


@dataclass(frozen=True)
class BudgetSchedule:
    """Per-sample computation allotment.

    Correction gets ``correction_time_fraction * h`` seconds; one
    gradient evaluation costs ``grad_eval_cost`` seconds and a Hessian
    ``hessian_cost_multiplier`` times that, so a Newton step costs
    (1 + multiplier) gradient evaluations. The refinement slot lasts
    ``refinement_time`` seconds and holds whatever ``refinement_policy``
    selects.
    """

    grad_eval_cost: float = 1.0 / 120.0
    hessian_cost_multiplier: float = 2.0
    correction_time_fraction: float = 0.1
    refinement_time: float = 1.0 / 40.0
    refinement_policy: RefinementPolicy = RefinementPolicy.PREDICTION


def _tolerant_floor(x: float) -> int:
    # exact fractions like 12*(1/3) must not round down to 3
    return int(math.floor(x + 1e-9 * max(1.0, abs(x))))


def budget_tau(schedule: BudgetSchedule, variant: Variant, h: float) -> int | None:
    """Correction steps affordable at sampling period h, or None when the
    variant cannot complete even one step in its slot (infeasible)."""
    newton = variant in _NEWTON_VARIANTS
    step_cost = schedule.grad_eval_cost * (
        1.0 + schedule.hessian_cost_multiplier if newton else 1.0
    )
    tau = _tolerant_floor(schedule.correction_time_fraction * h / step_cost)
    return tau if tau >= 1 else None


def refinement_steps(schedule: BudgetSchedule, newton: bool) -> int:
    step_cost = schedule.grad_eval_cost * (
        1.0 + schedule.hessian_cost_multiplier if newton else 1.0
    )
    return _tolerant_floor(schedule.refinement_time / step_cost)


@dataclass(frozen=True)
class SolverConfig:
    """One solver run: variant, timing, stepsize, and optional extras."""

    variant: Variant
    h: float
    steps: int
    x0: tuple[float, ...]
    gamma: float = 0.1
    tau: int = 1
    t0: float = 0.0
    v_max: float | None = None
    saturation: str = "net"  # "net" or "per-stage"
    budget: BudgetSchedule | None = None
    hybrid_c: float | None = None
    label: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "x0", tuple(float(v) for v in np.atleast_1d(self.x0)))
        if self.h <= 0:
            raise ValueError("h must be positive")
        if self.steps < 1:
            raise ValueError("steps must be at least 1")
        if self.budget is None and self.tau < 1:
            raise ValueError("tau must be at least 1")
        if self.v_max is not None and self.v_max <= 0:
            raise ValueError("v_max must be positive")
        if self.saturation not in ("net", "per-stage"):
            raise ValueError("saturation must be 'net' or 'per-stage'")
        if self.variant is Variant.HYBRID and self.budget is not None:
            raise ValueError("hybrid strategy does not support budget scheduling")

    @property
    def name(self) -> str:
        return self.label if self.label is not None else self.variant.value


@dataclass
class TrajectoryLog:
    """Per-sample records of one run, aligned arrays indexed by k.

    ``x[k]`` is the committed iterate at t_k, ``x_pred[k]`` the
    prediction made at t_k for t_{k+1} (equal to x[k] when the variant
    does not predict), ``x_star[k]`` the oracle optimizer, and the
    scalar columns the derived errors. ``switched`` flags samples
    produced by the hybrid's Newton phase.
    """

    variant: Variant
    label: str
    tau: int
    h: float
    gamma: float
    t0: float
    t: np.ndarray = field(repr=False, default=None)
    x: np.ndarray = field(repr=False, default=None)
    x_pred: np.ndarray = field(repr=False, default=None)
    x_star: np.ndarray = field(repr=False, default=None)
    err: np.ndarray = field(repr=False, default=None)
    pred_err: np.ndarray = field(repr=False, default=None)
    grad_norm: np.ndarray = field(repr=False, default=None)
    switched: np.ndarray = field(repr=False, default=None)
    switch_index: int | None = None

    def __len__(self) -> int:
        return len(self.t)


def saturate_motion(x_from: np.ndarray, x_to: np.ndarray, v_max: float,
                    h: float) -> np.ndarray:
    """Clip the displacement x_from -> x_to to speed v_max over period h."""
    if v_max <= 0:
        raise ValueError("v_max must be positive")
    step = x_to - x_from
    dist = float(np.linalg.norm(step))
    limit = v_max * h
    if dist <= limit:
        return x_to
    return x_from + (limit / dist) * step


def _alloc_log(config: SolverConfig, n: int) -> TrajectoryLog:
    K = config.steps
    return TrajectoryLog(
        variant=config.variant, label=config.name,
        tau=config.tau, h=config.h, gamma=config.gamma, t0=config.t0,
        t=np.empty(K), x=np.empty((K, n)), x_pred=np.empty((K, n)),
        x_star=np.empty((K, n)), err=np.empty(K), pred_err=np.empty(K),
        grad_norm=np.empty(K), switched=np.zeros(K, dtype=bool),
    )


def _truncate(log: TrajectoryLog, k: int) -> TrajectoryLog:
    for name in ("t", "x", "x_pred", "x_star", "err", "pred_err",
                 "grad_norm", "switched"):
        setattr(log, name, getattr(log, name)[:k])
    return log


def _oracle_for(obj, config, oracle_trajectory):
    if oracle_trajectory is not None:
        arr = np.asarray(oracle_trajectory, dtype=float)
        if arr.shape != (config.steps + 1, obj.dim):
            raise ValueError(
                f"oracle trajectory must have shape {(config.steps + 1, obj.dim)}"
            )
        return arr
    return oracle_mod.optimal_trajectory(obj, config.t0, config.h, config.steps)


def drive(obj: TimeVaryingObjective, config: SolverConfig,
          pred_mode: PredictionMode, corr_mode: CorrectionMode,
          oracle_trajectory: np.ndarray | None = None,
          stale_correction: bool = False) -> TrajectoryLog:
    """Run the sample/predict/acquire/correct loop with explicit modes.

    ``stale_correction`` makes the corrections act on the objective at
    the current sample instead of the next one; that is what turns the
    no-prediction loop into the running baselines.
    """
    if pred_mode is PredictionMode.EXACT_TIME_DERIVATIVE and obj.mixed_tx is None:
        raise MissingDerivative("this variant needs the analytic time derivative")
    x_star = _oracle_for(obj, config, oracle_trajectory)
    log = _alloc_log(config, obj.dim)
    h, t0, K = config.h, config.t0, config.steps
    x = np.array(config.x0, dtype=float)
    k = 0
    try:
        for k in range(K):
            t = t0 + k * h
            log.t[k] = t
            log.x[k] = x
            log.x_star[k] = x_star[k]
            log.err[k] = np.linalg.norm(x - x_star[k])
            log.grad_norm[k] = np.linalg.norm(obj.gradient(x, t))

            if pred_mode is PredictionMode.BACKWARD_DIFFERENCE and k == 0:
                xp = x.copy()  # no previous gradient yet
            elif pred_mode is PredictionMode.BACKWARD_DIFFERENCE:
                xp = predict(obj, x, t, h, pred_mode,
                             prev_grad=obj.gradient(x, t - h))
            else:
                xp = predict(obj, x, t, h, pred_mode)
            log.x_pred[k] = xp
            log.pred_err[k] = np.linalg.norm(xp - x_star[k + 1])

            if stale_correction:
                z = correct(obj, x, t, corr_mode, config.tau)
            else:
                z = correct(obj, xp, t + h, corr_mode, config.tau)

            if config.v_max is not None:
                if config.saturation == "per-stage" and not stale_correction:
                    xp_sat = saturate_motion(x, xp, config.v_max, h)
                    z = xp_sat + (z - xp)
                z = saturate_motion(x, z, config.v_max, h)
            x = z
    except NonFinite as exc:
        raise NonFinite(str(exc), partial_log=_truncate(log, k)) from None
    return log


def _budget_drive(obj, config, pred_mode, corr_mode, oracle_trajectory):
    schedule = config.budget
    tau_b = budget_tau(schedule, config.variant, config.h)
    if tau_b is None:
        raise Infeasible(
            f"{config.variant.value} cannot afford one correction step at h={config.h}"
        )
    newton_corr = isinstance(corr_mode, NewtonCorrection)
    policy = schedule.refinement_policy
    if policy is RefinementPolicy.EXTRA_NEWTON:
        n_extra = refinement_steps(schedule, newton=True)
        extra_mode: CorrectionMode = NewtonCorrection()
    elif policy is RefinementPolicy.EXTRA_GRADIENTS:
        n_extra = refinement_steps(schedule, newton=False)
        extra_mode = GradientCorrection(config.gamma)
    else:
        n_extra = 0
        extra_mode = None

    x_star = _oracle_for(obj, config, oracle_trajectory)
    log = _alloc_log(config, obj.dim)
    log.tau = tau_b
    h, t0, K = config.h, config.t0, config.steps
    x = np.array(config.x0, dtype=float)
    carry = x.copy()
    k = 0

    def refine(xc, t, first):
        if policy is RefinementPolicy.PREDICTION:
            if pred_mode is PredictionMode.BACKWARD_DIFFERENCE:
                if first:
                    return xc.copy()
                return predict(obj, xc, t, h, pred_mode,
                               prev_grad=obj.gradient(xc, t - h))
            if pred_mode is PredictionMode.NO_PREDICTION:
                return xc.copy()
            return predict(obj, xc, t, h, pred_mode)
        if n_extra >= 1:
            return correct(obj, xc, t, extra_mode, n_extra)
        return xc.copy()

    try:
        for k in range(K):
            t = t0 + k * h
            if k > 0:
                z = correct(obj, carry, t, corr_mode, tau_b)
                if config.v_max is not None:
                    z = saturate_motion(x, z, config.v_max, h)
                x = z
            log.t[k] = t
            log.x[k] = x
            log.x_star[k] = x_star[k]
            log.err[k] = np.linalg.norm(x - x_star[k])
            log.grad_norm[k] = np.linalg.norm(obj.gradient(x, t))
            carry = refine(x, t, first=(k == 0))
            if policy is RefinementPolicy.PREDICTION:
                log.x_pred[k] = carry
            else:
                log.x_pred[k] = x
            log.pred_err[k] = np.linalg.norm(log.x_pred[k] - x_star[k + 1])
    except NonFinite as exc:
        raise NonFinite(str(exc), partial_log=_truncate(log, k)) from None
    return log


def _modes_for(config: SolverConfig) -> tuple[PredictionMode, CorrectionMode]:
    v = config.variant
    if v in _EXACT_VARIANTS:
        pred = PredictionMode.EXACT_TIME_DERIVATIVE
    elif v in _RUNNING_VARIANTS:
        pred = PredictionMode.NO_PREDICTION
    else:
        pred = PredictionMode.BACKWARD_DIFFERENCE
    if v in _NEWTON_VARIANTS:
        corr: CorrectionMode = NewtonCorrection()
    else:
        corr = GradientCorrection(config.gamma)
    return pred, corr


def run(obj: TimeVaryingObjective, config: SolverConfig,
        oracle_trajectory: np.ndarray | None = None) -> TrajectoryLog:
    """Execute one run of the configured variant against the oracle."""
    if config.variant is Variant.HYBRID:
        return hybrid_run(obj, config, oracle_trajectory)
    pred, corr = _modes_for(config)
    if config.budget is not None:
        return _budget_drive(obj, config, pred, corr, oracle_trajectory)
    return drive(obj, config, pred, corr, oracle_trajectory,
                 stale_correction=config.variant in _RUNNING_VARIANTS)


def hybrid_run(obj: TimeVaryingObjective, config: SolverConfig,
               oracle_trajectory: np.ndarray | None = None) -> TrajectoryLog:
    """Gradient corrections until |grad| <= m c h^2, then Newton for good.

    The switch constant must exceed the gradient phase's asymptotic
    floor coefficient or the condition may never trigger.
    """
    if config.variant is not Variant.HYBRID:
        raise ValueError("hybrid_run requires the HYBRID variant")
    if obj.constants is None:
        raise MissingDerivative("hybrid strategy needs smoothness constants")
    if obj.mixed_tx is None:
        raise MissingDerivative("hybrid strategy needs the analytic time derivative")
    hc = hybrid_constants(config.tau, config.gamma, config.h, obj.constants)
    c_loc = config.hybrid_c
    if c_loc is None or c_loc <= hc.c_min:
        raise InvalidHybridC(
            f"hybrid_c must exceed {hc.c_min:.6g}, got {c_loc}"
        )
    threshold = hc.switch_threshold(c_loc)

    x_star = _oracle_for(obj, config, oracle_trajectory)
    log = _alloc_log(config, obj.dim)
    h, t0, K = config.h, config.t0, config.steps
    grad_mode = GradientCorrection(config.gamma)
    newton_mode = NewtonCorrection()
    x = np.array(config.x0, dtype=float)
    switched = False
    k = 0
    try:
        for k in range(K):
            t = t0 + k * h
            gn = float(np.linalg.norm(obj.gradient(x, t)))
            if not switched and gn <= threshold:
                switched = True
                log.switch_index = k
            log.t[k] = t
            log.x[k] = x
            log.x_star[k] = x_star[k]
            log.err[k] = np.linalg.norm(x - x_star[k])
            log.grad_norm[k] = gn
            log.switched[k] = switched

            xp = predict(obj, x, t, h, PredictionMode.EXACT_TIME_DERIVATIVE)
            log.x_pred[k] = xp
            log.pred_err[k] = np.linalg.norm(xp - x_star[k + 1])
            z = correct(obj, xp, t + h, newton_mode if switched else grad_mode,
                        config.tau)
            if config.v_max is not None:
                z = saturate_motion(x, z, config.v_max, h)
            x = z
    except NonFinite as exc:
        raise NonFinite(str(exc), partial_log=_truncate(log, k)) from None
    return log
