"""Command-line entry point.

Subcommands: ``init`` (emit a built-in example config), ``run`` (one
experiment, time-series CSV + JSON summary), ``sweep`` (h-grid sweep
CSV + summary), ``bounds`` (print the bound report as JSON).

Config files are strict JSON: a ``version`` field is required and
unknown keys anywhere are rejected. Diagnostics go to stderr; data goes
to files (or stdout for ``bounds``). Exit codes: 0 success, 2 config
validation failure, 3 numerical failure (partial CSV preserved).
"""

from __future__ import annotations

import argparse
import datetime
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import bounds, harness, oracle, problems, tracker
from .errors import ConfigError, TvTrackError
from .tracker import BudgetSchedule, RefinementPolicy, SolverConfig, Variant

CONFIG_VERSION = 1

_TOP_KEYS = {"version", "name", "problem", "run", "solvers", "sweep"}
_PROBLEM_KEYS = {
    "scalar": {"kind", "omega", "kappa", "mu"},
    "tracking": {"kind", "mu1", "mu2", "base", "omega", "domain"},
    "quadratic": {"kind", "n", "drift", "rate", "offset", "amplitude", "freq"},
}
_RUN_KEYS = {"h", "steps", "kbar", "x0", "t0", "v_max", "saturation",
             "include_reference"}
_SOLVER_KEYS = {"variant", "tau", "gamma", "label", "hybrid_c", "budget"}
_BUDGET_KEYS = {"grad_eval_cost", "hessian_cost_multiplier",
                "correction_time_fraction", "refinement_time",
                "refinement_policy"}
_SWEEP_KEYS = {"h_grid", "kbar"}


def _check_keys(d: dict, allowed: set, where: str) -> None:
    unknown = sorted(set(d) - allowed)
    if unknown:
        raise ConfigError(f"unknown key(s) {unknown} in {where}")


def load_config(path: str | Path) -> dict:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    try:
        cfg = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {path}: {exc}") from None
    if not isinstance(cfg, dict):
        raise ConfigError(f"{path}: config must be a JSON object")
    _check_keys(cfg, _TOP_KEYS, "config")
    if cfg.get("version") != CONFIG_VERSION:
        raise ConfigError(f"{path}: expected \"version\": {CONFIG_VERSION}")
    for section in ("problem", "run", "solvers"):
        if section not in cfg:
            raise ConfigError(f"{path}: missing \"{section}\" section")
    prob = cfg["problem"]
    kind = prob.get("kind")
    if kind not in _PROBLEM_KEYS:
        raise ConfigError(f"unknown problem kind {kind!r}")
    _check_keys(prob, _PROBLEM_KEYS[kind], "problem")
    _check_keys(cfg["run"], _RUN_KEYS, "run")
    if not isinstance(cfg["solvers"], list) or not cfg["solvers"]:
        raise ConfigError("\"solvers\" must be a nonempty list")
    for i, sol in enumerate(cfg["solvers"]):
        _check_keys(sol, _SOLVER_KEYS, f"solvers[{i}]")
        if "budget" in sol and sol["budget"] is not None:
            _check_keys(sol["budget"], _BUDGET_KEYS, f"solvers[{i}].budget")
    if "sweep" in cfg:
        _check_keys(cfg["sweep"], _SWEEP_KEYS, "sweep")
    return cfg


def _budget_from_dict(d: dict | None) -> BudgetSchedule | None:
    if d is None:
        return None
    d = dict(d)
    if "refinement_policy" in d:
        d["refinement_policy"] = RefinementPolicy(d["refinement_policy"])
    return BudgetSchedule(**d)


def solver_configs(cfg: dict, h: float | None = None) -> list[SolverConfig]:
    run = cfg["run"]
    out = []
    try:
        for sol in cfg["solvers"]:
            out.append(SolverConfig(
                variant=Variant(sol["variant"].upper()),
                h=run["h"] if h is None else h,
                steps=int(run["steps"]),
                x0=run.get("x0", [0.0]),
                gamma=float(sol.get("gamma", 0.1)),
                tau=int(sol.get("tau", 1)),
                t0=float(run.get("t0", 0.0)),
                v_max=run.get("v_max"),
                saturation=run.get("saturation", "net"),
                budget=_budget_from_dict(sol.get("budget")),
                hybrid_c=sol.get("hybrid_c"),
                label=sol.get("label"),
            ))
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"invalid solver configuration: {exc}") from None
    labels = [c.name for c in out]
    if len(set(labels)) != len(labels):
        raise ConfigError(f"solver labels are not unique: {labels}")
    return out


def _out_dir(args) -> Path:
    out = args.out or os.environ.get("TVOPT_OUT") or "."
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _diag(args, msg: str) -> None:
    if not args.quiet:
        print(msg, file=sys.stderr)


def _experiment_name(cfg: dict, config_path: str) -> str:
    return cfg.get("name") or Path(config_path).stem


def _summary_bounds(obj, configs) -> dict:
    reports = {}
    if obj.constants is None:
        return reports
    for c in configs:
        try:
            rep = bounds.bound_report(obj.constants, c.gamma, c.tau, c.h,
                                      c_loc=c.hybrid_c)
        except TvTrackError:
            continue
        reports[c.name] = rep.as_json_dict()
    return reports


def _write_summary(path: Path, payload: dict) -> None:
    payload = {"generated_at": datetime.datetime.now(datetime.timezone.utc)
               .isoformat(), **payload}
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def cmd_run(args) -> int:
    cfg = load_config(args.config)
    name = _experiment_name(cfg, args.config)
    out = _out_dir(args)
    obj = problems.problem_from_dict(cfg["problem"])
    configs = solver_configs(cfg)
    run = cfg["run"]
    kbar = int(run.get("kbar", 0))
    if obj.constants is not None:
        lim = 2.0 / obj.constants.L
        for c in configs:
            if c.variant not in (Variant.NTT, Variant.ANT, Variant.RN) \
                    and c.gamma >= lim:
                _diag(args, f"warning: {c.name}: gamma={c.gamma} >= 2/L={lim:.4g}; "
                            "no contraction guarantee")

    steps = max(c.steps for c in configs)
    x_star = oracle.optimal_trajectory(obj, configs[0].t0, configs[0].h, steps)

    ts_path = out / f"{name}_timeseries.csv"
    logs = []
    for c in configs:
        _diag(args, f"running {c.name} (h={c.h}, steps={c.steps})")
        try:
            logs.append(tracker.run(obj, c, x_star[: c.steps + 1]))
        except TvTrackError as exc:
            partial = getattr(exc, "partial_log", None)
            if partial is not None and len(partial):
                logs.append(partial)
            if logs:
                harness.write_timeseries_csv(ts_path, name, logs, obj.constants)
            print(f"error: {c.name}: {exc}", file=sys.stderr)
            return 3

    reference = None
    if cfg["problem"]["kind"] == "tracking" and run.get("include_reference"):
        path_fn = problems.lissajous_path(
            omega=cfg["problem"].get("omega", problems.TRACKING_OMEGA))
        K = configs[0].steps
        reference = np.array([path_fn.position(configs[0].t0 + k * configs[0].h)
                              for k in range(K + 1)])
    harness.write_timeseries_csv(ts_path, name, logs, obj.constants,
                                 reference=reference)

    per_solver = {}
    for log in logs:
        entry = {"variant": log.variant.value, "tau": int(log.tau),
                 "final_err": float(log.err[-1])}
        if kbar + 1 < len(log):
            entry["floor"] = harness.worst_case_error(log, kbar)
        if log.switch_index is not None:
            entry["switch_index"] = int(log.switch_index)
        per_solver[log.label] = entry
    _write_summary(out / f"{name}_summary.json", {
        "name": name, "problem": cfg["problem"], "h": run["h"],
        "kbar": kbar, "solvers": per_solver,
        "bounds": _summary_bounds(obj, configs),
    })
    _diag(args, f"wrote {ts_path}")
    return 0


def cmd_sweep(args) -> int:
    cfg = load_config(args.config)
    name = _experiment_name(cfg, args.config)
    out = _out_dir(args)
    if "sweep" not in cfg:
        raise ConfigError("config has no \"sweep\" section")
    h_grid = cfg["sweep"].get("h_grid", [])
    if not h_grid:
        raise ConfigError("sweep.h_grid must be nonempty")
    kbar = int(cfg["sweep"].get("kbar", cfg["run"].get("kbar", 0)))
    spec = harness.ExperimentSpec(
        name=name, problem=cfg["problem"],
        solvers=tuple(solver_configs(cfg)),
        h_grid=tuple(h_grid), kbar=kbar,
    )
    _diag(args, f"sweeping {len(spec.h_grid)} periods x {len(spec.solvers)} solvers")
    try:
        result = harness.run_sweep(spec, jobs=args.jobs)
    except TvTrackError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    sweep_path = out / f"{name}_sweep.csv"
    harness.write_sweep_csv(sweep_path, result)

    summary: dict = {"name": name, "problem": cfg["problem"],
                     "h_grid": list(spec.h_grid), "kbar": kbar}
    if any(c.budget is not None for c in spec.solvers):
        table: dict = {}
        for c in spec.solvers:
            if c.budget is None:
                continue
            table[c.name] = {
                harness._fmt(h): tracker.budget_tau(c.budget, c.variant, h)
                for h in spec.h_grid
            }
        summary["budget_table"] = table
    slopes = {}
    for row in result.rows:
        if row.slope is not None:
            slopes[row.variant] = row.slope
    summary["slopes"] = slopes
    _write_summary(out / f"{name}_summary.json", summary)
    _diag(args, f"wrote {sweep_path}")
    return 0


def cmd_bounds(args) -> int:
    cfg = load_config(args.config)
    obj = problems.problem_from_dict(cfg["problem"])
    if obj.constants is None:
        raise ConfigError("problem has no smoothness constants")
    configs = solver_configs(cfg)
    c = configs[0]
    rep = bounds.bound_report(obj.constants, c.gamma, c.tau, c.h,
                              c_loc=c.hybrid_c)
    print(json.dumps(rep.as_json_dict(), indent=2, sort_keys=True))
    return 0


def _example_config(example: str) -> dict:
    scalar_a_problem = {"kind": "scalar", "omega": 0.02 * math.pi,
                        "kappa": 7.5, "mu": 1.75}
    if example == "scalar-a":
        return {
            "version": 1,
            "problem": scalar_a_problem,
            "run": {"h": 0.1, "steps": 20000, "kbar": 10000, "x0": [0.0]},
            "solvers": [
                {"variant": "RG", "gamma": 0.2, "tau": 1},
                {"variant": "GTT", "gamma": 0.2, "tau": 1, "label": "GTT-1"},
                {"variant": "GTT", "gamma": 0.2, "tau": 3, "label": "GTT-3"},
                {"variant": "GTT", "gamma": 0.2, "tau": 5, "label": "GTT-5"},
                {"variant": "AGT", "gamma": 0.2, "tau": 1},
                {"variant": "NTT", "tau": 1},
                {"variant": "HYBRID", "gamma": 0.2, "tau": 1, "hybrid_c": 0.05},
            ],
            "sweep": {"h_grid": [1 / 16, 1 / 8, 1 / 4, 1 / 2, 1.0]},
        }
    if example == "scalar-b":
        cfg = _example_config("scalar-a")
        cfg["problem"] = {"kind": "scalar", "omega": 0.02 * math.pi,
                          "kappa": 0.1, "mu": 0.5}
        for sol in cfg["solvers"]:
            if "gamma" in sol:
                sol["gamma"] = 1.0
        return cfg
    if example == "tracking":
        return {
            "version": 1,
            "problem": {"kind": "tracking", "mu1": problems.TRACKING_MU1,
                        "mu2": problems.TRACKING_MU2,
                        "base": [100.0, 100.0], "omega": 0.01,
                        "domain": [[-150.0, 150.0], [-150.0, 150.0]]},
            "run": {"h": 1.0, "steps": 16000, "kbar": 8000,
                    "x0": [0.0, 0.0], "v_max": 4.0,
                    "include_reference": True},
            "solvers": [
                {"variant": "RG", "gamma": 0.05, "tau": 1},
                {"variant": "AGT", "gamma": 0.05, "tau": 1, "label": "AGT-1"},
                {"variant": "AGT", "gamma": 0.05, "tau": 3, "label": "AGT-3"},
                {"variant": "AGT", "gamma": 0.05, "tau": 5, "label": "AGT-5"},
                {"variant": "ANT", "tau": 1},
            ],
            "sweep": {"h_grid": [1 / 10, 1 / 4, 1 / 3, 1 / 2, 2 / 3, 3 / 4, 1.0]},
        }
    if example == "budget":
        budget = {"refinement_policy": "prediction"}
        cfg = {
            "version": 1,
            "problem": _example_config("tracking")["problem"],
            "run": {"h": 1.0, "steps": 12000, "kbar": 8000,
                    "x0": [0.0, 0.0], "v_max": 4.0},
            "solvers": [
                {"variant": "RG", "gamma": 0.05, "label": "RG+3G",
                 "budget": {"refinement_policy": "extra-gradients"}},
                {"variant": "RG", "gamma": 0.05, "label": "RG+1N",
                 "budget": {"refinement_policy": "extra-newton"}},
                {"variant": "RN", "label": "RN+1N",
                 "budget": {"refinement_policy": "extra-newton"}},
                {"variant": "AGT", "gamma": 0.05, "budget": dict(budget)},
                {"variant": "ANT", "budget": dict(budget)},
            ],
            "sweep": {"h_grid": [1 / 10, 1 / 4, 1 / 3, 1 / 2, 2 / 3, 3 / 4, 1.0]},
        }
        return cfg
    raise ConfigError(f"unknown example {example!r}")


EXAMPLES = ("scalar-a", "scalar-b", "tracking", "budget")


def cmd_init(args) -> int:
    cfg = _example_config(args.example)
    out = _out_dir(args)
    path = out / f"{args.example.replace('-', '_')}.json"
    path.write_text(json.dumps(cfg, indent=2) + "\n")
    _diag(args, f"wrote {path}")
    print(str(path))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tvopt",
        description="Track solutions of time-varying strongly convex problems",
    )
    parser.add_argument("--out", default=None,
                        help="output directory (default: $TVOPT_OUT or .)")
    parser.add_argument("--jobs", type=int, default=os.cpu_count() or 1,
                        help="parallel sweep workers")
    parser.add_argument("--quiet", action="store_true",
                        help="suppress diagnostics on stderr")
    sub = parser.add_subparsers(dest="command", required=True)
    p_init = sub.add_parser("init", help="write a built-in example config")
    p_init.add_argument("--example", choices=EXAMPLES, required=True)
    p_init.set_defaults(func=cmd_init)
    for name, func, hlp in (("run", cmd_run, "run one experiment"),
                            ("sweep", cmd_sweep, "run an h-grid sweep"),
                            ("bounds", cmd_bounds, "print the bound report")):
        p = sub.add_parser(name, help=hlp)
        p.add_argument("config", help="path to a JSON config file")
        p.set_defaults(func=func)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except TvTrackError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
