"""Benchmark harness tests: config validation, determinism, outputs."""

import csv
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from optpursuit.cli import (
    ConfigError,
    aggregate_rows,
    load_config,
    main,
    parse_config,
    run_experiment,
    trial_seed,
)

BASE = {
    "task": "recover",
    "solvers": ["omp", "op"],
    "trials": 5,
    "master_seed": 3,
    "grid": {"p": 40, "k": 4, "n": [20], "snr_db": [20.0]},
}


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def strip_columns(table, names):
    drop = [table[0].index(n) for n in names if n in table[0]]
    return [[c for i, c in enumerate(row) if i not in drop] for row in table]


def test_parse_config_errors():
    with pytest.raises(ConfigError, match="task"):
        parse_config({"task": "fly", "grid": {"p": 2}})
    with pytest.raises(ConfigError, match="grid"):
        parse_config({"task": "recover", "solvers": ["omp"]})
    with pytest.raises(ConfigError, match="trials"):
        parse_config({**BASE, "trials": 0})
    with pytest.raises(ConfigError, match="solvers"):
        parse_config({**BASE, "solvers": ["nope"]})
    with pytest.raises(ConfigError, match="preprocess"):
        parse_config({**BASE, "preprocess": {"whiten": True}})
    with pytest.raises(ConfigError, match="phase.cols"):
        parse_config({**BASE, "phase": {"rows": "n"}})


def test_trial_seed_stability():
    a = trial_seed(7, "recover", {"n": 50, "snr_db": 15.0}, 3)
    b = trial_seed(7, "recover", {"snr_db": 15.0, "n": 50}, 3)
    assert a == b  # key order must not matter
    assert a != trial_seed(7, "recover", {"n": 50, "snr_db": 15.0}, 4)
    assert a != trial_seed(8, "recover", {"n": 50, "snr_db": 15.0}, 3)


def test_recover_grid_row_counts(tmp_path):
    cfg = parse_config(BASE)
    rows, agg = run_experiment(cfg, tmp_path)
    assert len(rows) == 5 * 2  # trials x solvers
    assert len(agg) == 2
    table = read_csv(tmp_path / "results.csv")
    assert len(table) == 11
    assert "solver" in table[0] and "nmse" in table[0]
    assert (tmp_path / "run_meta.txt").exists()


def test_results_reproducible_across_runs_and_threads(tmp_path):
    cfg = parse_config(BASE)
    run_experiment(cfg, tmp_path / "a", threads=1)
    run_experiment(cfg, tmp_path / "b", threads=1)
    run_experiment(cfg, tmp_path / "c", threads=2)
    tables = [read_csv(tmp_path / d / "results.csv") for d in "abc"]
    stripped = [strip_columns(t, ["wall_time_ns"]) for t in tables]
    assert stripped[0] == stripped[1] == stripped[2]


def test_aggregate_is_pure_function_of_rows(tmp_path):
    cfg = parse_config(BASE)
    rows, agg = run_experiment(cfg, tmp_path)
    _, again = aggregate_rows(cfg, rows)
    assert agg == again
    by_solver = {a["solver"]: a for a in agg}
    for solver in ("omp", "op"):
        raw = [r for r in rows if r["solver"] == solver]
        assert by_solver[solver]["trials"] == len(raw) == 5
        assert by_solver[solver]["success_count"] == sum(r["success"] for r in raw)


def test_phase_grid_emission(tmp_path):
    cfg = parse_config({
        **BASE,
        "trials": 2,
        "grid": {"p": 40, "k": 4, "sampling_rate": [0.5, 0.8], "snr_db": [10.0, 20.0]},
        "phase": {"rows": "sampling_rate", "cols": "snr_db", "value": "nmse"},
    })
    rows, _ = run_experiment(cfg, tmp_path)
    for solver in ("omp", "op"):
        table = read_csv(tmp_path / f"phase_nmse_{solver}.csv")
        assert len(table) == 3 and len(table[0]) == 3
        assert table[0][0] == "sampling_rate\\snr_db"
        cells = np.array([[float(c) for c in row[1:]] for row in table[1:]])
        assert np.all(np.isfinite(cells))


def test_phase_grid_nmse_decreases_with_snr(tmp_path):
    """Mean NMSE trends down along the SNR axis for every solver row."""
    from scipy.stats import spearmanr

    cfg = parse_config({
        "task": "recover",
        "solvers": ["omp", "op"],
        "trials": 10,
        "master_seed": 9,
        "grid": {"p": 100, "k": 6, "sampling_rate": [0.4, 0.6],
                 "snr_db": [5.0, 12.0, 20.0, 30.0], "rho": 0.7,
                 "signal_kind": "block"},
        "phase": {"rows": "sampling_rate", "cols": "snr_db", "value": "nmse"},
    })
    run_experiment(cfg, tmp_path)
    for solver in ("omp", "op"):
        table = read_csv(tmp_path / f"phase_nmse_{solver}.csv")
        snrs = [float(c) for c in table[0][1:]]
        for row in table[1:]:
            nmse_row = [float(c) for c in row[1:]]
            rho, _ = spearmanr(snrs, nmse_row)
            assert rho < 0.0, (solver, row)


def test_regress_task(tmp_path):
    cfg = parse_config({
        "task": "regress",
        "solvers": ["op"],
        "trials": 2,
        "master_seed": 5,
        "grid": {"p": 30, "n": [60], "k": [4], "snr_db": [15.0]},
    })
    rows, agg = run_experiment(cfg, tmp_path)
    assert all(r["error"] == "" for r in rows)
    assert all(0.0 < float(r["r2"]) <= 1.0 for r in rows)
    assert all(float(r["cv_pred_error"]) >= 0.0 for r in rows)


def test_css_task(tmp_path):
    cfg = parse_config({
        "task": "css",
        "solvers": ["classic-greedy", "optimal-greedy", "leverage", "svd-bound"],
        "trials": 3,
        "master_seed": 4,
        "grid": {"family": "lowrank", "n": 20, "p": 12, "rank": 6, "noise": 0.1,
                 "k": 4, "leverage_vectors": 6},
    })
    rows, _ = run_experiment(cfg, tmp_path)
    assert len(rows) == 12
    by_trial = {}
    for r in rows:
        by_trial.setdefault(r["trial"], {})[r["solver"]] = float(r["rel_error"])
    for trial, errs in by_trial.items():
        assert errs["svd-bound"] <= min(errs.values()) + 1e-10


def test_timing_task_emits_ratios(tmp_path):
    cfg = parse_config({
        "task": "timing",
        "solvers": ["omp", "op", "gp", "ogp"],
        "trials": 5,
        "master_seed": 2,
        "grid": {"p": 60, "k": 5, "n": [30], "snr_db": [20.0]},
    })
    run_experiment(cfg, tmp_path)
    table = read_csv(tmp_path / "timing_ratios.csv")
    pairs = {(row[1], row[2]) for row in table[1:]}
    assert ("op", "omp") in pairs and ("ogp", "gp") in pairs
    for row in table[1:]:
        assert float(row[5]) > 0.0


def test_oracle_check_task(tmp_path):
    cfg = parse_config({
        "task": "oracle-check",
        "trials": 12,
        "master_seed": 6,
        "grid": {"n": 15, "p": 8, "kmax": 4},
    })
    rows, _ = run_experiment(cfg, tmp_path)
    sel = [r["agree_select"] for r in rows if r["agree_select"] != ""]
    assert sel and all(v == 1 for v in sel)
    eli = [r["agree_eliminate"] for r in rows if r["agree_eliminate"] != ""]
    assert eli and all(v == 1 for v in eli)


def test_main_oracle_check_exit_zero(capsys):
    rc = main(["oracle-check", "--n", "15", "--p", "8", "--kmax", "3",
               "--trials", "6", "--seed", "1"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "selection agreement:   1.0000" in out


def test_main_run_and_config_error(tmp_path, capsys):
    cfg_path = tmp_path / "exp.toml"
    cfg_path.write_text(
        'task = "recover"\nsolvers = ["omp"]\ntrials = 2\nmaster_seed = 1\n'
        '[grid]\np = 20\nk = 2\nn = [10]\n'
    )
    rc = main(["run", str(cfg_path), "--out", str(tmp_path / "out")])
    assert rc == 0
    assert (tmp_path / "out" / "results.csv").exists()

    bad = tmp_path / "bad.toml"
    bad.write_text('task = "recover"\n')
    assert main(["run", str(bad)]) == 2


def test_main_run_exit_three_when_grid_point_all_fails(tmp_path):
    cfg_path = tmp_path / "exp.toml"
    # k exceeds n at this grid point; every trial raises.
    cfg_path.write_text(
        'task = "recover"\nsolvers = ["omp"]\ntrials = 2\nmaster_seed = 1\n'
        '[grid]\np = 20\nk = 8\nn = [5]\n'
    )
    assert main(["run", str(cfg_path), "--out", str(tmp_path / "out")]) == 3


def test_threads_env_fallback(tmp_path, monkeypatch):
    cfg_path = tmp_path / "exp.toml"
    cfg_path.write_text(
        'task = "recover"\nsolvers = ["omp"]\ntrials = 4\nmaster_seed = 1\n'
        '[grid]\np = 20\nk = 2\nn = [10]\n'
    )
    monkeypatch.setenv("OPTPURSUIT_THREADS", "2")
    assert main(["run", str(cfg_path), "--out", str(tmp_path / "out")]) == 0
    assert (tmp_path / "out" / "results.csv").exists()


def test_main_css_subcommand(tmp_path, capsys):
    rng = np.random.default_rng(0)
    X = rng.standard_normal((12, 6))
    path = tmp_path / "X.csv"
    np.savetxt(path, X, delimiter=",")
    rc = main(["css", "--input", str(path), "--k", "2", "--variant", "optimal-greedy"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "relative error" in out


def test_console_script_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "optpursuit.cli", "oracle-check", "--n", "12",
         "--p", "6", "--kmax", "3", "--trials", "3", "--seed", "2"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr


def test_shipped_configs_parse():
    for path in sorted(Path(__file__).resolve().parent.parent.glob("configs/*.toml")):
        cfg = load_config(path)
        assert cfg.trials >= 1
