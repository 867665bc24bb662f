"""Prediction-correction tracking of time-varying strongly convex problems.

The package samples a continuously varying objective at a fixed period,
predicts how the minimizer drifts between samples, corrects with
gradient or Newton steps, and certifies the tracking error against
closed-form envelopes.
"""

from .bounds import (BoundReport, HybridConstants, NewtonCheck,
                     TrackingEnvelope, bound_report, contraction_factor,
                     gradient_tracking_envelope, hybrid_constants,
                     max_h_for_oh2, newton_tracking_check,
                     prediction_inflation, truncation_bound)
from .harness import (ExperimentSpec, SweepResult, SweepRow, loglog_slope,
                      run_sweep, worst_case_error, write_sweep_csv,
                      write_timeseries_csv)
from .objective import (AssumptionReport, SmoothnessConstants,
                        TimeVaryingObjective, check_assumptions,
                        fd_time_gradient)
from .oracle import continuous_flow, optimal_point, optimal_trajectory
from .problems import (ReferencePath, ScalarProblemParams,
                       TrackingProblemParams, lissajous_path,
                       make_quadratic_problem, make_scalar_problem,
                       make_tracking_problem, problem_from_dict)
from .stepper import (GradientCorrection, NewtonCorrection, PredictionMode,
                      correct, predict)
from .tracker import (BudgetSchedule, RefinementPolicy, SolverConfig,
                      TrajectoryLog, Variant, budget_tau, drive, hybrid_run,
                      run, saturate_motion)

__version__ = "0.1.0"

__all__ = [
    "AssumptionReport", "BoundReport", "BudgetSchedule", "ExperimentSpec",
    "GradientCorrection", "HybridConstants", "NewtonCheck",
    "NewtonCorrection", "PredictionMode", "ReferencePath",
    "RefinementPolicy", "ScalarProblemParams", "SmoothnessConstants",
    "SolverConfig", "SweepResult", "SweepRow", "TimeVaryingObjective",
    "TrackingEnvelope", "TrackingProblemParams", "TrajectoryLog", "Variant",
    "bound_report", "budget_tau", "check_assumptions", "continuous_flow",
    "contraction_factor", "correct", "drive", "fd_time_gradient",
    "gradient_tracking_envelope", "hybrid_constants", "hybrid_run",
    "lissajous_path", "loglog_slope", "make_quadratic_problem",
    "make_scalar_problem", "make_tracking_problem", "max_h_for_oh2",
    "newton_tracking_check", "optimal_point", "optimal_trajectory",
    "predict", "prediction_inflation", "problem_from_dict", "run",
    "run_sweep", "saturate_motion", "truncation_bound", "worst_case_error",
    "write_sweep_csv", "write_timeseries_csv",
]
