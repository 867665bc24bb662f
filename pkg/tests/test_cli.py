import csv
import json
import math

import pytest

from tvtrack import cli


def write_config(tmp_path, name="exp.json", **overrides):
    cfg = {
        "version": 1,
        "problem": {"kind": "scalar", "omega": 0.02 * math.pi,
                    "kappa": 7.5, "mu": 1.75},
        "run": {"h": 0.1, "steps": 60, "kbar": 30, "x0": [0.0]},
        "solvers": [{"variant": "GTT", "gamma": 0.2, "tau": 1}],
        "sweep": {"h_grid": [0.1, 0.2, 0.4]},
    }
    cfg.update(overrides)
    path = tmp_path / name
    path.write_text(json.dumps(cfg))
    return path


def test_run_writes_csv_and_summary(tmp_path, capsys):
    cfg = write_config(tmp_path)
    rc = cli.main(["--out", str(tmp_path), "run", str(cfg)])
    assert rc == 0
    ts = tmp_path / "exp_timeseries.csv"
    summary = json.loads((tmp_path / "exp_summary.json").read_text())
    assert ts.exists()
    assert "generated_at" in summary
    assert summary["solvers"]["GTT"]["floor"] > 0
    assert summary["bounds"]["GTT"]["rho"] == 0.8
    with open(ts, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0][:3] == ["experiment", "variant", "tau"]
    assert len(rows) == 61


def test_run_missing_config_names_path(tmp_path, capsys):
    rc = cli.main(["run", str(tmp_path / "absent.json")])
    assert rc == 2
    assert "absent.json" in capsys.readouterr().err


def test_run_rejects_unknown_keys(tmp_path, capsys):
    cfg = write_config(tmp_path, extra_section={"a": 1})
    assert cli.main(["run", str(cfg)]) == 2
    assert "unknown key" in capsys.readouterr().err

    path = tmp_path / "bad2.json"
    base = json.loads(write_config(tmp_path).read_text())
    base["run"]["hh"] = 1
    path.write_text(json.dumps(base))
    assert cli.main(["run", str(path)]) == 2


def test_run_rejects_bad_version(tmp_path, capsys):
    cfg = write_config(tmp_path, version=99)
    assert cli.main(["run", str(cfg)]) == 2
    assert "version" in capsys.readouterr().err


def test_run_warns_on_large_gamma(tmp_path, capsys):
    cfg = write_config(
        tmp_path,
        solvers=[{"variant": "GTT", "gamma": 0.5, "tau": 1}])  # 2/L = 0.297
    with pytest.warns(UserWarning):
        rc = cli.main(["--out", str(tmp_path), "run", str(cfg)])
    assert rc == 0
    assert "2/L" in capsys.readouterr().err


def test_sweep_writes_rows_per_cell(tmp_path):
    cfg = write_config(tmp_path)
    rc = cli.main(["--out", str(tmp_path), "--jobs", "1", "--quiet",
                   "sweep", str(cfg)])
    assert rc == 0
    with open(tmp_path / "exp_sweep.csv", newline="") as fh:
        rows = list(csv.reader(fh))
    assert tuple(rows[0]) == ("experiment", "variant", "tau", "h",
                              "worst_case_error", "slope", "envelope")
    assert len(rows) == 1 + 3  # one per (variant, h)


def test_sweep_empty_grid_exits_2(tmp_path, capsys):
    cfg = write_config(tmp_path, sweep={"h_grid": []})
    assert cli.main(["--out", str(tmp_path), "sweep", str(cfg)]) == 2


def test_bounds_prints_report(tmp_path, capsys):
    cfg = write_config(tmp_path)
    rc = cli.main(["bounds", str(cfg)])
    assert rc == 0
    report = json.loads(capsys.readouterr().out)
    assert report["rho"] == 0.8
    assert abs(report["h_max_oh2"] - 1.029) <= 0.002


def test_bounds_quadratic_sentinel(tmp_path, capsys):
    cfg = write_config(
        tmp_path,
        problem={"kind": "quadratic", "n": 1, "drift": "affine",
                 "rate": [1.0]},
        solvers=[{"variant": "GTT", "gamma": 1.0, "tau": 1}])
    assert cli.main(["bounds", str(cfg)]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["Q"] == "quadratic"


def test_init_emits_each_example(tmp_path, capsys):
    for example in cli.EXAMPLES:
        rc = cli.main(["--out", str(tmp_path), "--quiet", "init",
                       "--example", example])
        assert rc == 0
        path = tmp_path / f"{example.replace('-', '_')}.json"
        assert path.exists()
        cfg = cli.load_config(path)  # validates strictly
        assert cfg["version"] == 1


def test_init_run_roundtrip_small(tmp_path):
    # emitted config runs without edits (shrunk horizon for test speed)
    rc = cli.main(["--out", str(tmp_path), "--quiet", "init",
                   "--example", "scalar-a"])
    assert rc == 0
    path = tmp_path / "scalar_a.json"
    cfg = json.loads(path.read_text())
    cfg["run"]["steps"] = 120
    cfg["run"]["kbar"] = 60
    small = tmp_path / "small.json"
    small.write_text(json.dumps(cfg))
    assert cli.main(["--out", str(tmp_path), "--quiet", "run", str(small)]) == 0
    summary = json.loads((tmp_path / "small_summary.json").read_text())
    assert set(summary["solvers"]) == {"RG", "GTT-1", "GTT-3", "GTT-5",
                                       "AGT", "NTT", "HYBRID"}


def test_budget_sweep_summary_reproduces_schedule(tmp_path):
    cfg = {
        "version": 1,
        "problem": {"kind": "quadratic", "n": 1, "drift": "sine"},
        "run": {"h": 1.0, "steps": 200, "kbar": 100, "x0": [0.0]},
        "solvers": [
            {"variant": "RG", "gamma": 0.5,
             "budget": {"refinement_policy": "extra-gradients"}},
            {"variant": "RN",
             "budget": {"refinement_policy": "extra-newton"}},
        ],
        "sweep": {"h_grid": [1 / 10, 1 / 4, 1 / 3, 1 / 2, 2 / 3, 3 / 4, 1.0]},
    }
    path = tmp_path / "budget.json"
    path.write_text(json.dumps(cfg))
    rc = cli.main(["--out", str(tmp_path), "--quiet", "--jobs", "1",
                   "sweep", str(path)])
    assert rc == 0
    summary = json.loads((tmp_path / "budget_summary.json").read_text())
    rg = summary["budget_table"]["RG"]
    rn = summary["budget_table"]["RN"]
    assert list(rg.values()) == [1, 3, 4, 6, 8, 9, 12]
    assert list(rn.values()) == [None, 1, 1, 2, 2, 3, 4]


def test_out_dir_env_var(tmp_path, monkeypatch):
    target = tmp_path / "outputs"
    monkeypatch.setenv("TVOPT_OUT", str(target))
    cfg = write_config(tmp_path)
    assert cli.main(["--quiet", "run", str(cfg)]) == 0
    assert (target / "exp_timeseries.csv").exists()


def test_quiet_suppresses_diagnostics(tmp_path, capsys):
    cfg = write_config(tmp_path)
    assert cli.main(["--out", str(tmp_path), "--quiet", "run", str(cfg)]) == 0
    assert capsys.readouterr().err == ""


@pytest.mark.filterwarnings("ignore:overflow")
def test_numerical_failure_exit_3_with_partial_csv(tmp_path, capsys):
    cfg = write_config(
        tmp_path, name="diverge.json",
        run={"h": 0.1, "steps": 500, "kbar": 10, "x0": [0.0]},
        solvers=[{"variant": "RG", "gamma": 40.0, "tau": 1}])
    with pytest.warns(UserWarning):
        rc = cli.main(["--out", str(tmp_path), "--quiet", "run", str(cfg)])
    assert rc == 3
    ts = tmp_path / "diverge_timeseries.csv"
    assert ts.exists()
    with open(ts, newline="") as fh:
        rows = list(csv.reader(fh))
    assert 1 < len(rows) < 501
