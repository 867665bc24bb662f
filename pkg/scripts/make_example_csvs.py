#!/usr/bin/env python3
"""Regenerate the example CSVs shipped under plots/examples/.

Deliberately shorter horizons than the full studies so the files stay
small; the schemas are identical to full harness output.
"""

import pathlib
import sys

import numpy as np

import tvtrack as tv
from tvtrack.tracker import RefinementPolicy, Variant

OUT = pathlib.Path(__file__).resolve().parent.parent / "plots" / "examples"

SCALAR = {"kind": "scalar", "omega": 0.02 * np.pi, "kappa": 7.5, "mu": 1.75}
TRACKING = {"kind": "tracking"}


def scalar_timeseries():
    obj = tv.problem_from_dict(SCALAR)
    steps = 1500
    x_star = tv.optimal_trajectory(obj, 0.0, 0.1, steps)

    def cfg(variant, tau=1, label=None, **kw):
        return tv.SolverConfig(variant=variant, h=0.1, steps=steps, x0=[0.0],
                               gamma=0.2, tau=tau, label=label, **kw)

    configs = [cfg(Variant.RG), cfg(Variant.GTT, label="GTT-1"),
               cfg(Variant.GTT, tau=3, label="GTT-3"),
               cfg(Variant.GTT, tau=5, label="GTT-5"), cfg(Variant.AGT),
               cfg(Variant.NTT), cfg(Variant.HYBRID, hybrid_c=0.05)]
    logs = [tv.run(obj, c, x_star) for c in configs]
    tv.write_timeseries_csv(OUT / "scalar_timeseries.csv", "scalar-a", logs,
                            obj.constants)


def scalar_sweep():
    obj_spec = SCALAR

    def cfg(variant):
        return tv.SolverConfig(variant=variant, h=0.1, steps=6000, x0=[0.0],
                               gamma=0.2, tau=1, label=variant.value)

    spec = tv.ExperimentSpec(
        name="scalar-a", problem=obj_spec,
        solvers=tuple(cfg(v) for v in (Variant.RG, Variant.GTT, Variant.AGT,
                                       Variant.NTT)),
        h_grid=(1 / 16, 1 / 8, 1 / 4, 1 / 2), kbar=3000)
    tv.write_sweep_csv(OUT / "scalar_sweep.csv", tv.run_sweep(spec, jobs=2))


def tracking_trajectory():
    obj = tv.problem_from_dict(TRACKING)
    steps = 320
    x_star = tv.optimal_trajectory(obj, 0.0, 1.0, steps)

    def cfg(variant, **kw):
        return tv.SolverConfig(variant=variant, h=1.0, steps=steps,
                               x0=[0.0, 0.0], gamma=0.05, tau=1, v_max=4.0,
                               **kw)

    logs = [tv.run(obj, cfg(v), x_star)
            for v in (Variant.RG, Variant.AGT, Variant.ANT)]
    path = tv.lissajous_path()
    ref = np.array([path.position(k * 1.0) for k in range(steps + 1)])
    tv.write_timeseries_csv(OUT / "tracking_trajectory.csv", "tracking",
                            logs, obj.constants, reference=ref)


def budget_sweep():
    def cfg(variant, policy, label, gamma=0.05):
        return tv.SolverConfig(
            variant=variant, h=1.0, steps=3000, x0=[0.0, 0.0], gamma=gamma,
            label=label,
            budget=tv.BudgetSchedule(refinement_policy=policy))

    spec = tv.ExperimentSpec(
        name="budget", problem=TRACKING,
        solvers=(
            cfg(Variant.RG, RefinementPolicy.EXTRA_GRADIENTS, "RG+3G"),
            cfg(Variant.RG, RefinementPolicy.EXTRA_NEWTON, "RG+1N"),
            cfg(Variant.RN, RefinementPolicy.EXTRA_NEWTON, "RN+1N"),
            cfg(Variant.AGT, RefinementPolicy.PREDICTION, "AGT"),
            cfg(Variant.ANT, RefinementPolicy.PREDICTION, "ANT"),
        ),
        h_grid=(1 / 10, 1 / 4, 1 / 3, 1 / 2, 2 / 3, 3 / 4, 1.0), kbar=1500)
    tv.write_sweep_csv(OUT / "budget_sweep.csv", tv.run_sweep(spec, jobs=2))


if __name__ == "__main__":
    OUT.mkdir(parents=True, exist_ok=True)
    for job in (scalar_timeseries, scalar_sweep, tracking_trajectory,
                budget_sweep):
        print(f"generating {job.__name__} ...", file=sys.stderr)
        job()
    print(f"example CSVs written to {OUT}", file=sys.stderr)
