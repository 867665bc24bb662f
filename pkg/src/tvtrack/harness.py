"""Experiment orchestration: metrics, h-sweeps, and CSV serialization.

CSV schemas (headers are fixed; floats carry 17 significant digits so
every value round-trips bit-exact):

time series
    experiment,variant,tau,h,gamma,k,t,err,pred_err,grad_norm,bound_env,
    switched[,x0..x{n-1},xs0..xs{n-1}]

sweeps
    experiment,variant,tau,h,worst_case_error,slope,envelope

Empty cells encode None (infeasible budget cells, missing envelopes).
The variant column holds the solver label, so one sweep may carry
several configurations of the same algorithm.
"""

from __future__ import annotations

import csv
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import bounds, oracle, problems, tracker
from .errors import Infeasible, NonPositive, TooShort
from .objective import SmoothnessConstants
from .tracker import SolverConfig, TrajectoryLog, Variant

TIMESERIES_HEADER = ("experiment", "variant", "tau", "h", "gamma", "k", "t",
                     "err", "pred_err", "grad_norm", "bound_env", "switched")
SWEEP_HEADER = ("experiment", "variant", "tau", "h", "worst_case_error",
                "slope", "envelope")

# Measured errors at or below the oracle's own accuracy are meaningless;
# they are clamped to this floor before slope fitting.
ERROR_FLOOR = 1e-13

DEFAULT_SCALAR_KBAR = 10_000
DEFAULT_TRACKING_KBAR = 8_000
DEFAULT_SCALAR_H_GRID = (1 / 16, 1 / 8, 1 / 4, 1 / 2, 1.0)
DEFAULT_TRACKING_H_GRID = (1 / 10, 1 / 4, 1 / 3, 1 / 2, 2 / 3, 3 / 4, 1.0)


def worst_case_error(log: TrajectoryLog, kbar: int) -> float:
    """Largest tracking error beyond the warm-up cutoff kbar."""
    if len(log) <= kbar + 1:
        raise TooShort(f"log has {len(log)} samples, none beyond kbar={kbar}")
    return float(log.err[kbar + 1 :].max())


def loglog_fit(pairs) -> tuple[float, float]:
    """Least-squares slope of log(error) vs log(h), with RMS residual."""
    pairs = list(pairs)
    if len(pairs) < 3:
        raise ValueError("need at least 3 (h, error) pairs")
    for h, e in pairs:
        if h <= 0 or e <= 0:
            raise NonPositive(f"non-positive pair ({h}, {e})")
    lx = np.log([p[0] for p in pairs])
    ly = np.log([p[1] for p in pairs])
    coef = np.polyfit(lx, ly, 1)
    resid = ly - np.polyval(coef, lx)
    return float(coef[0]), float(np.sqrt(np.mean(resid**2)))


def loglog_slope(pairs) -> float:
    return loglog_fit(pairs)[0]


def envelope_for_log(constants: SmoothnessConstants | None,
                     log: TrajectoryLog) -> np.ndarray | None:
    """Per-sample error bound matching the log's variant, if one applies.

    Gradient-corrected predictors get the exponential envelope (tight
    h^2 form when available). Running baselines and the hybrid have no
    envelope here; Newton variants only when their locality condition
    admits the run.
    """
    if constants is None or log.variant is None:
        return None
    ks = np.arange(len(log))
    v = log.variant
    if v in (Variant.GTT, Variant.AGT):
        rho = bounds.contraction_factor(log.gamma, constants.m, constants.L)
        if rho >= 1:
            return None
        env = bounds.gradient_tracking_envelope(
            ks, log.tau, log.h, log.gamma, constants, float(log.err[0]),
            approximate=(v is Variant.AGT))
        return env.per_k_oh2 if env.per_k_oh2 is not None else env.per_k_oh
    if v in (Variant.NTT, Variant.ANT):
        if constants.c1 == 0.0 or log.err[0] == 0.0:
            return None
        c_loc = float(log.err[0]) / log.h**2
        chk = bounds.newton_tracking_check(
            c_loc, log.tau, log.h, constants, approximate=(v is Variant.ANT))
        if not chk.admissible:
            return None
        env = np.full(len(log), chk.floor)
        env[0] = float(log.err[0])
        return env
    return None


def sweep_envelope(constants: SmoothnessConstants | None, variant: Variant,
                   tau: int, h: float, gamma: float) -> float | None:
    """Asymptotic bound attached to one sweep cell, where defined."""
    if constants is None or variant not in (Variant.GTT, Variant.AGT):
        return None
    rho = bounds.contraction_factor(gamma, constants.m, constants.L)
    if rho >= 1:
        return None
    env = bounds.gradient_tracking_envelope(
        0, tau, h, gamma, constants, 0.0, approximate=(variant is Variant.AGT))
    return env.asymptotic_oh2 if env.asymptotic_oh2 is not None else env.asymptotic_oh


@dataclass(frozen=True)
class ExperimentSpec:
    """One sweep: a problem, solver configs, an h grid, and the cutoff."""

    name: str
    problem: dict
    solvers: tuple[SolverConfig, ...]
    h_grid: tuple[float, ...]
    kbar: int
    out_dir: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "solvers", tuple(self.solvers))
        object.__setattr__(self, "h_grid", tuple(float(h) for h in self.h_grid))
        if not self.h_grid:
            raise ValueError("h_grid must be nonempty")
        if any(b <= a for a, b in zip(self.h_grid, self.h_grid[1:])):
            raise ValueError("h_grid must be strictly increasing")
        for cfg in self.solvers:
            if self.kbar >= cfg.steps:
                raise ValueError(
                    f"kbar={self.kbar} must be below steps={cfg.steps} "
                    f"for solver {cfg.name}")


@dataclass(frozen=True)
class SweepRow:
    experiment: str
    variant: str
    tau: int | None
    h: float
    worst_case_error: float | None
    slope: float | None
    envelope: float | None


@dataclass(frozen=True)
class SweepResult:
    rows: tuple[SweepRow, ...]
    fit_residuals: dict = field(default_factory=dict, compare=False)


def _sweep_task(args):
    """Run every solver at one h; grouped so the oracle is shared."""
    problem_spec, h, solvers, kbar = args
    obj = problems.problem_from_dict(problem_spec)
    constants = obj.constants
    steps = max(cfg.steps for cfg in solvers)
    t0 = solvers[0].t0
    x_star = oracle.optimal_trajectory(obj, t0, h, steps)
    out = []
    for cfg in solvers:
        cell = {"label": cfg.name, "variant": cfg.variant.value, "h": h}
        run_cfg = tracker.SolverConfig(
            variant=cfg.variant, h=h, steps=cfg.steps, x0=cfg.x0,
            gamma=cfg.gamma, tau=cfg.tau, t0=cfg.t0, v_max=cfg.v_max,
            saturation=cfg.saturation, budget=cfg.budget,
            hybrid_c=cfg.hybrid_c, label=cfg.label)
        try:
            log = tracker.run(obj, run_cfg, x_star[: cfg.steps + 1])
        except Infeasible:
            cell.update(tau=None, wce=None)
            out.append(cell)
            continue
        cell.update(tau=log.tau, wce=worst_case_error(log, kbar))
        cell["envelope"] = sweep_envelope(constants, cfg.variant, log.tau,
                                          h, cfg.gamma)
        out.append(cell)
    return out


def run_sweep(spec: ExperimentSpec, jobs: int = 1) -> SweepResult:
    """Execute every (solver, h) cell and assemble metrics.

    Infeasible budget cells are recorded with empty error and tau.
    Slopes are fitted per solver label across its feasible cells after
    clamping errors at the oracle floor; a label needs at least three
    feasible cells to get a slope.
    """
    tasks = [(spec.problem, h, spec.solvers, spec.kbar) for h in spec.h_grid]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=min(jobs, len(tasks))) as pool:
            results = list(pool.map(_sweep_task, tasks))
    else:
        results = [_sweep_task(t) for t in tasks]

    by_label: dict[str, list[tuple[float, float]]] = {}
    for cells in results:
        for cell in cells:
            if cell["wce"] is not None:
                by_label.setdefault(cell["label"], []).append(
                    (cell["h"], max(cell["wce"], ERROR_FLOOR)))
    slopes: dict[str, tuple[float, float]] = {}
    for label, pairs in by_label.items():
        if len(pairs) >= 3:
            slopes[label] = loglog_fit(pairs)

    rows = []
    for cells in results:
        for cell in cells:
            fit = slopes.get(cell["label"])
            rows.append(SweepRow(
                experiment=spec.name,
                variant=cell["label"],
                tau=cell["tau"],
                h=cell["h"],
                worst_case_error=cell["wce"],
                slope=None if fit is None else fit[0],
                envelope=cell.get("envelope"),
            ))
    rows.sort(key=lambda r: (r.variant, r.h))
    return SweepResult(rows=tuple(rows),
                       fit_residuals={k: v[1] for k, v in slopes.items()})


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, float) and math.isinf(v):
        return "inf"
    return f"{v:.17g}"


def write_timeseries_csv(path, experiment: str, logs,
                         constants: SmoothnessConstants | None = None,
                         reference: np.ndarray | None = None) -> None:
    """Serialize run logs (plus an optional reference path) to CSV.

    ``reference`` is a (K+1, n) array of reference-path points, written
    as pseudo-variant "REF" rows so trajectory plots can draw the path
    without recomputing anything.
    """
    logs = list(logs)
    if not logs:
        raise ValueError("need at least one log")
    n = logs[0].x.shape[1]
    header = list(TIMESERIES_HEADER) + [f"x{i}" for i in range(n)] \
        + [f"xs{i}" for i in range(n)]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for log in logs:
            env = envelope_for_log(constants, log)
            for k in range(len(log)):
                row = [experiment, log.label, _fmt(log.tau), _fmt(log.h),
                       _fmt(log.gamma), _fmt(k), _fmt(log.t[k]),
                       _fmt(float(log.err[k])), _fmt(float(log.pred_err[k])),
                       _fmt(float(log.grad_norm[k])),
                       _fmt(None if env is None else float(env[k])),
                       _fmt(bool(log.switched[k]))]
                row += [_fmt(float(v)) for v in log.x[k]]
                row += [_fmt(float(v)) for v in log.x_star[k]]
                w.writerow(row)
        if reference is not None:
            ref = np.asarray(reference, dtype=float)
            log0 = logs[0]
            K = len(log0)
            for k in range(K):
                err = float(np.linalg.norm(ref[k] - log0.x_star[k]))
                row = [experiment, "REF", "0", _fmt(log0.h), "0", _fmt(k),
                       _fmt(log0.t[k]), _fmt(err), _fmt(err), "0", "",
                       "0"]
                row += [_fmt(float(v)) for v in ref[k]]
                row += [_fmt(float(v)) for v in log0.x_star[k]]
                w.writerow(row)


def write_sweep_csv(path, result: SweepResult) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(SWEEP_HEADER)
        for r in result.rows:
            w.writerow([r.experiment, r.variant, _fmt(r.tau), _fmt(r.h),
                        _fmt(r.worst_case_error), _fmt(r.slope),
                        _fmt(r.envelope)])


def read_sweep_csv(path) -> tuple[SweepRow, ...]:
    def opt_float(s):
        return None if s == "" else float(s)

    rows = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = tuple(next(reader))
        if header != SWEEP_HEADER:
            raise ValueError(f"unexpected sweep header {header}")
        for rec in reader:
            rows.append(SweepRow(
                experiment=rec[0], variant=rec[1],
                tau=None if rec[2] == "" else int(rec[2]),
                h=float(rec[3]),
                worst_case_error=opt_float(rec[4]),
                slope=opt_float(rec[5]),
                envelope=opt_float(rec[6]),
            ))
    return tuple(rows)
