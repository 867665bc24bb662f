import csv
import math

import numpy as np
import pytest

import tvtrack as tv
from tvtrack import harness
from tvtrack.errors import NonPositive, TooShort
from tvtrack.tracker import Variant


def make_log(err, variant=Variant.GTT, h=0.1, gamma=0.2, tau=1):
    K = len(err)
    return tv.TrajectoryLog(
        variant=variant, label=variant.value, tau=tau, h=h, gamma=gamma,
        t0=0.0, t=np.arange(K) * h, x=np.zeros((K, 1)),
        x_pred=np.zeros((K, 1)), x_star=np.zeros((K, 1)),
        err=np.asarray(err, float), pred_err=np.zeros(K),
        grad_norm=np.zeros(K), switched=np.zeros(K, dtype=bool))


def test_worst_case_error_constant():
    log = make_log(np.full(100, 0.25))
    assert tv.worst_case_error(log, 10) == 0.25


def test_worst_case_error_decreasing_tail():
    err = np.array([1.0] + [1.0 / k for k in range(1, 101)])
    log = make_log(err)  # err[k] = 1/k for k >= 1
    assert tv.worst_case_error(log, 10) == 1.0 / 11


def test_worst_case_error_too_short():
    log = make_log(np.ones(5))
    with pytest.raises(TooShort):
        tv.worst_case_error(log, 4)
    with pytest.raises(TooShort):
        tv.worst_case_error(log, 10)


def test_loglog_slope_exact_powers():
    hs = (0.1, 0.2, 0.4)
    assert tv.loglog_slope([(h, h * h) for h in hs]) == pytest.approx(2.0, abs=1e-12)
    assert tv.loglog_slope([(h, 5 * h) for h in hs]) == pytest.approx(1.0, abs=1e-12)


def test_loglog_slope_validation():
    with pytest.raises(ValueError):
        tv.loglog_slope([(0.1, 1.0), (0.2, 2.0)])
    with pytest.raises(NonPositive):
        tv.loglog_slope([(0.1, 1.0), (0.2, 0.0), (0.4, 2.0)])
    with pytest.raises(NonPositive):
        tv.loglog_slope([(0.1, 1.0), (-0.2, 1.0), (0.4, 2.0)])


def quad_spec():
    return {"kind": "quadratic", "n": 1, "drift": "sine"}


def solver(variant, **kw):
    base = dict(h=0.1, steps=600, x0=[0.0], gamma=0.5, tau=1)
    base.update(kw)
    return tv.SolverConfig(variant=variant, **base)


def test_run_sweep_newton_exact_on_quadratic(tmp_path):
    # Newton solves quadratics in one step: worst-case errors at oracle level
    spec = tv.ExperimentSpec(
        name="quad", problem=quad_spec(),
        solvers=(solver(Variant.NTT), solver(Variant.RG, label="RG")),
        h_grid=(0.05, 0.1, 0.2, 0.4), kbar=200)
    result = tv.run_sweep(spec)
    ntt_rows = [r for r in result.rows if r.variant == "NTT"]
    assert len(ntt_rows) == 4
    assert all(r.worst_case_error <= 1e-10 for r in ntt_rows)
    rg_rows = [r for r in result.rows if r.variant == "RG"]
    assert all(r.worst_case_error > 1e-4 for r in rg_rows)
    assert rg_rows[0].slope == pytest.approx(1.0, abs=0.35)

    path = tmp_path / "sweep.csv"
    tv.write_sweep_csv(path, result)
    assert harness.read_sweep_csv(path) == result.rows


def test_run_sweep_parallel_matches_serial():
    spec = tv.ExperimentSpec(
        name="quad", problem=quad_spec(),
        solvers=(solver(Variant.GTT, steps=300),), h_grid=(0.1, 0.2, 0.4),
        kbar=100)
    serial = tv.run_sweep(spec, jobs=1)
    parallel = tv.run_sweep(spec, jobs=3)
    assert serial.rows == parallel.rows


def test_run_sweep_records_infeasible_cells():
    sched = tv.BudgetSchedule()
    spec = tv.ExperimentSpec(
        name="budget", problem=quad_spec(),
        solvers=(solver(Variant.RN, steps=300, budget=sched),),
        h_grid=(1 / 10, 1 / 4), kbar=100)
    rows = tv.run_sweep(spec).rows
    infeasible = [r for r in rows if r.h == 1 / 10][0]
    assert infeasible.worst_case_error is None
    assert infeasible.tau is None
    feasible = [r for r in rows if r.h == 1 / 4][0]
    assert feasible.tau == 1
    assert feasible.worst_case_error is not None


def test_experiment_spec_validation():
    with pytest.raises(ValueError):
        tv.ExperimentSpec(name="x", problem=quad_spec(),
                          solvers=(solver(Variant.GTT),), h_grid=(), kbar=1)
    with pytest.raises(ValueError):
        tv.ExperimentSpec(name="x", problem=quad_spec(),
                          solvers=(solver(Variant.GTT),),
                          h_grid=(0.2, 0.1), kbar=1)
    with pytest.raises(ValueError):
        tv.ExperimentSpec(name="x", problem=quad_spec(),
                          solvers=(solver(Variant.GTT, steps=10),),
                          h_grid=(0.1,), kbar=10)


def test_worst_case_error_monotone_in_h(scalar_a):
    # floors grow with the sampling period (one-grid-point slack)
    floors = []
    for h in (1 / 16, 1 / 8, 1 / 4, 1 / 2):
        log = tv.run(scalar_a, solver(Variant.GTT, h=h, steps=3000, gamma=0.2))
        floors.append(tv.worst_case_error(log, 1500))
    violations = sum(b < a for a, b in zip(floors, floors[1:]))
    assert violations <= 1


def test_timeseries_csv_schema_and_fidelity(scalar_a, tmp_path):
    log = tv.run(scalar_a, solver(Variant.GTT, steps=40, gamma=0.2))
    path = tmp_path / "ts.csv"
    tv.write_timeseries_csv(path, "demo", [log], scalar_a.constants)
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    assert tuple(rows[0]) == harness.TIMESERIES_HEADER + ("x0", "xs0")
    assert len(rows) == 41
    rec = rows[1 + 7]  # k = 7
    assert rec[0] == "demo"
    assert rec[1] == "GTT"
    assert int(rec[5]) == 7
    # 17 significant digits round-trip bit-exact
    assert float(rec[7]) == log.err[7]
    assert float(rec[12]) == log.x[7, 0]
    assert float(rec[13]) == log.x_star[7, 0]
    # envelope column is present and bounds the measured error
    assert float(rec[10]) >= float(rec[7])


def test_timeseries_csv_reference_rows(tracking, tmp_path):
    config = tv.SolverConfig(variant=Variant.AGT, h=1.0, steps=20,
                             x0=[0.0, 0.0], gamma=0.05, tau=1)
    log = tv.run(tracking, config)
    path_fn = tv.lissajous_path()
    ref = np.array([path_fn.position(k * 1.0) for k in range(21)])
    out = tmp_path / "track.csv"
    tv.write_timeseries_csv(out, "track", [log], tracking.constants,
                            reference=ref)
    with open(out, newline="") as fh:
        rows = list(csv.reader(fh))
    ref_rows = [r for r in rows[1:] if r[1] == "REF"]
    assert len(ref_rows) == 20
    assert float(ref_rows[0][12]) == 100.0  # x0 of y(0)
    assert float(ref_rows[0][13]) == 0.0


def test_envelope_for_log_choices(scalar_a, quad_affine_1d):
    gtt = tv.run(scalar_a, solver(Variant.GTT, steps=30, gamma=0.2))
    env = harness.envelope_for_log(scalar_a.constants, gtt)
    assert env is not None and np.all(env >= gtt.err - 1e-12)
    rg = tv.run(scalar_a, solver(Variant.RG, steps=30, gamma=0.2))
    assert harness.envelope_for_log(scalar_a.constants, rg) is None
    # quadratic problem: Newton envelope undefined (c1 = 0)
    ntt = tv.run(quad_affine_1d, solver(Variant.NTT, steps=30))
    assert harness.envelope_for_log(quad_affine_1d.constants, ntt) is None
    assert harness.envelope_for_log(None, gtt) is None
