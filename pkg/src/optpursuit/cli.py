"""Benchmark harness: run experiment grids from TOML configs to CSV tables.

Usage:
    optpursuit run <config.toml> [--threads N] [--out DIR]
    optpursuit oracle-check --n N --p P --kmax K --trials T --seed S [--rho R]
    optpursuit css --input X.csv --k K --variant V [--leverage-vectors M]

Every trial's seed is a stable hash of the master seed, the grid
coordinates and the trial index, so results are byte-identical regardless
of execution order or worker count (wall-time columns excepted). Exit
codes: 0 success, 2 config error, 3 when some grid point failed on every
trial for some solver.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import math
import os
import statistics
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import css as css_mod
from . import criteria, metrics, oracle, synthetic
from .linalg import least_squares_on_support
from .solvers import SOLVER_REGISTRY, run_solver

SCHEMA_VERSION = "optpursuit/results-v1"

TASKS = ("recover", "regress", "css", "oracle-check", "timing")

_COLUMNS = {
    "recover": [
        "task", "sampling_rate", "n", "p", "k", "snr_db", "rho", "signal_kind",
        "solver", "trial", "seed", "success", "nmse", "rss", "iterations",
        "wall_time_ns", "error",
    ],
    "regress": [
        "task", "n", "p", "k", "snr_db", "rho", "solver", "trial", "seed",
        "r2", "cv_pred_error", "rss", "iterations", "wall_time_ns", "error",
    ],
    "css": [
        "task", "family", "n", "p", "rank", "noise", "k", "solver", "trial",
        "seed", "rel_error", "svd_bound", "wall_time_ns", "error",
    ],
    "oracle-check": [
        "task", "n", "p", "kmax", "rho", "size", "solver", "trial", "seed",
        "agree_select", "agree_eliminate", "wall_time_ns", "error",
    ],
}
_COLUMNS["timing"] = _COLUMNS["recover"]

_METRIC_FIELDS = (
    "success", "nmse", "rss", "r2", "cv_pred_error", "rel_error", "svd_bound",
    "agree_select", "agree_eliminate", "iterations",
)


class ConfigError(ValueError):
    """Invalid experiment configuration; message carries the field path."""


@dataclass
class ExperimentConfig:
    task: str
    solvers: list[str]
    trials: int
    master_seed: int
    grid: dict
    preprocess: dict = field(default_factory=dict)
    solver_params: dict = field(default_factory=dict)
    phase: dict | None = None
    output: str | None = None


def _as_list(value):
    return list(value) if isinstance(value, (list, tuple)) else [value]


def load_config(path) -> ExperimentConfig:
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except (OSError, tomllib.TOMLDecodeError) as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e
    return parse_config(raw)


def parse_config(raw: dict) -> ExperimentConfig:
    task = raw.get("task")
    if task not in TASKS:
        raise ConfigError(f"task: expected one of {TASKS}, got {task!r}")
    grid = raw.get("grid")
    if not isinstance(grid, dict) or not grid:
        raise ConfigError("grid: required non-empty table")
    trials = raw.get("trials", 1)
    if not isinstance(trials, int) or trials < 1:
        raise ConfigError(f"trials: must be a positive integer, got {trials!r}")
    master_seed = raw.get("master_seed", 0)
    if not isinstance(master_seed, int):
        raise ConfigError(f"master_seed: must be an integer, got {master_seed!r}")
    solvers = raw.get("solvers", [])
    if task in ("recover", "timing", "regress"):
        if not solvers:
            raise ConfigError("solvers: required for solver tasks")
        for name in solvers:
            if name not in SOLVER_REGISTRY:
                raise ConfigError(
                    f"solvers: unknown solver {name!r}; registered: {sorted(SOLVER_REGISTRY)}"
                )
    elif task == "css":
        if not solvers:
            raise ConfigError("solvers: required for css task")
        allowed = set(css_mod.CSS_VARIANTS) | {"leverage", "svd-bound"}
        for name in solvers:
            if name not in allowed:
                raise ConfigError(f"solvers: unknown css method {name!r}; allowed: {sorted(allowed)}")
    preprocess = raw.get("preprocess", {})
    defaults = {"center": task == "regress", "normalize": task == "regress"}
    for key in preprocess:
        if key not in defaults:
            raise ConfigError(f"preprocess.{key}: unknown flag")
    defaults.update(preprocess)
    phase = raw.get("phase")
    if phase is not None:
        for key in ("rows", "cols"):
            if key not in phase:
                raise ConfigError(f"phase.{key}: required")
        if phase.get("value", "nmse") not in ("nmse", "success"):
            raise ConfigError("phase.value: expected 'nmse' or 'success'")
    return ExperimentConfig(
        task=task,
        solvers=list(solvers),
        trials=trials,
        master_seed=master_seed,
        grid=dict(grid),
        preprocess=defaults,
        solver_params=dict(raw.get("solver_params", {})),
        phase=dict(phase) if phase is not None else None,
        output=raw.get("output"),
    )


def trial_seed(master_seed: int, task: str, coords: dict, trial: int) -> int:
    """Stable 63-bit seed from (master seed, grid coordinates, trial)."""
    parts = [f"{k}={coords[k]}" for k in sorted(coords)]
    text = f"{master_seed}|{task}|" + "|".join(parts) + f"|trial={trial}"
    digest = hashlib.sha256(text.encode()).digest()
    return int.from_bytes(digest[:8], "little") >> 1


def _grid_points(cfg: ExperimentConfig) -> list[dict]:
    g = cfg.grid
    points = [{}]

    def expand(key, values):
        nonlocal points
        points = [dict(pt, **{key: v}) for pt in points for v in values]

    if cfg.task in ("recover", "timing", "regress"):
        if "p" not in g:
            raise ConfigError("grid.p: required")
        expand("p", _as_list(g["p"]))
        if "sampling_rate" in g:
            expand("sampling_rate", _as_list(g["sampling_rate"]))
        elif "n" in g:
            expand("n", _as_list(g["n"]))
        else:
            raise ConfigError("grid.n or grid.sampling_rate: one is required")
        expand("k", _as_list(g.get("k", 10)))
        expand("snr_db", _as_list(g.get("snr_db", [None])))
        expand("rho", _as_list(g.get("rho", [None])))
        expand("signal_kind", _as_list(g.get("signal_kind", "random")))
        for pt in points:
            if "sampling_rate" in pt:
                pt["n"] = int(round(pt["sampling_rate"] * pt["p"]))
            else:
                pt["sampling_rate"] = ""
    elif cfg.task == "css":
        for key, default in (("n", None), ("p", None), ("k", None)):
            if key not in g and default is None:
                raise ConfigError(f"grid.{key}: required")
        expand("family", _as_list(g.get("family", "lowrank")))
        expand("n", _as_list(g["n"]))
        expand("p", _as_list(g["p"]))
        expand("rank", _as_list(g.get("rank", 5)))
        expand("noise", _as_list(g.get("noise", 0.1)))
        expand("k", _as_list(g["k"]))
    elif cfg.task == "oracle-check":
        for key in ("n", "p", "kmax"):
            if key not in g:
                raise ConfigError(f"grid.{key}: required")
        expand("n", _as_list(g["n"]))
        expand("p", _as_list(g["p"]))
        expand("kmax", _as_list(g["kmax"]))
        expand("rho", _as_list(g.get("rho", [None])))
    return points


def _preprocess(X, y, center, normalize):
    """Optional column centering and unit-norm scaling.

    Returns the transformed pair plus the per-column scales and the target
    mean needed to map coefficients and predictions back.
    """
    scales = np.ones(X.shape[1])
    y_mean = 0.0
    if center:
        X = X - X.mean(axis=0, keepdims=True)
        y_mean = float(y.mean())
        y = y - y_mean
    if normalize:
        norms = np.linalg.norm(X, axis=0)
        scales = np.where(norms > 0, norms, 1.0)
        X = X / scales
    return X, y, scales, y_mean


def _blank_metrics(row):
    for key in _METRIC_FIELDS + ("wall_time_ns",):
        row.setdefault(key, "")
    return row


def _run_recover_trial(cfg: ExperimentConfig, coords: dict, trial: int) -> list[dict]:
    seed = trial_seed(cfg.master_seed, cfg.task, coords, trial)
    inst = synthetic.generate_instance(
        coords["n"], coords["p"], coords["k"], seed,
        snr_db=coords["snr_db"], rho=coords["rho"], signal_kind=coords["signal_kind"],
    )
    X, y, scales, _ = _preprocess(
        inst.X, inst.y, cfg.preprocess["center"], cfg.preprocess["normalize"]
    )
    rows = []
    for name in cfg.solvers:
        row = {"task": cfg.task, **coords, "solver": name, "trial": trial, "seed": seed, "error": ""}
        try:
            report = run_solver(name, X, y, coords["k"], **cfg.solver_params)
            beta_hat = report.beta / scales
            row["success"] = int(metrics.exact_recovery(report.support, inst.true_support))
            row["nmse"] = metrics.nmse(beta_hat, inst.beta_true)
            resid = y - X @ report.beta
            row["rss"] = float(resid @ resid)
            row["iterations"] = report.iterations
            row["wall_time_ns"] = int(report.wall_time * 1e9)
        except Exception as e:  # noqa: BLE001 - failed trials become error rows
            row["error"] = f"{type(e).__name__}: {e}"
        rows.append(_blank_metrics(row))
    return rows


def _run_regress_trial(cfg: ExperimentConfig, coords: dict, trial: int) -> list[dict]:
    seed = trial_seed(cfg.master_seed, cfg.task, coords, trial)
    inst = synthetic.generate_instance(
        coords["n"], coords["p"], coords["k"], seed,
        snr_db=coords["snr_db"], rho=coords["rho"], signal_kind=coords["signal_kind"],
    )
    X, y, _, y_mean = _preprocess(
        inst.X, inst.y, cfg.preprocess["center"], cfg.preprocess["normalize"]
    )
    rows = []
    for name in cfg.solvers:
        row = {"task": cfg.task, **coords, "solver": name, "trial": trial, "seed": seed, "error": ""}
        try:
            report = run_solver(name, X, y, coords["k"], **cfg.solver_params)
            y_hat = X @ report.beta + y_mean
            row["r2"] = metrics.r_squared(inst.y, y_hat)
            resid = y - X @ report.beta
            row["rss"] = float(resid @ resid)

            def fit_predict(X_tr, y_tr, X_te, _name=name, _k=coords["k"]):
                rep = run_solver(_name, X_tr, y_tr, min(_k, X_tr.shape[0]), **cfg.solver_params)
                return X_te @ rep.beta

            row["cv_pred_error"] = metrics.cross_val_pred_error(
                X, y + y_mean, fit_predict, n_folds=5, seed=seed
            )
            row["iterations"] = report.iterations
            row["wall_time_ns"] = int(report.wall_time * 1e9)
        except Exception as e:  # noqa: BLE001
            row["error"] = f"{type(e).__name__}: {e}"
        rows.append(_blank_metrics(row))
    return rows


def _css_matrix(coords: dict, seed: int) -> np.ndarray:
    n, p = coords["n"], coords["p"]
    if coords["family"] == "gaussian":
        return synthetic.stream(seed, "css-design").standard_normal((n, p))
    if coords["family"] == "lowrank":
        rng = synthetic.stream(seed, "css-design")
        r = int(coords["rank"])
        U = rng.standard_normal((n, r))
        V = rng.standard_normal((p, r))
        G = rng.standard_normal((n, p))
        return U @ V.T + float(coords["noise"]) * G
    raise ConfigError(f"grid.family: unknown matrix family {coords['family']!r}")


def _run_css_trial(cfg: ExperimentConfig, coords: dict, trial: int) -> list[dict]:
    import time

    seed = trial_seed(cfg.master_seed, cfg.task, coords, trial)
    X = _css_matrix(coords, seed)
    k = coords["k"]
    bound = css_mod.svd_rank_bound(X, k)
    n_vectors = int(cfg.grid.get("leverage_vectors", min(coords["n"], coords["p"])))
    rows = []
    for name in cfg.solvers:
        row = {"task": cfg.task, **coords, "solver": name, "trial": trial, "seed": seed,
               "svd_bound": bound, "error": ""}
        try:
            t0 = time.perf_counter_ns()
            if name == "svd-bound":
                row["rel_error"] = bound
            elif name == "leverage":
                row["rel_error"] = css_mod.leverage_score_baseline(X, k, n_vectors).rel_error
            else:
                row["rel_error"] = css_mod.css_solve(X, k, variant=name).rel_error
            row["wall_time_ns"] = time.perf_counter_ns() - t0
        except Exception as e:  # noqa: BLE001
            row["error"] = f"{type(e).__name__}: {e}"
        rows.append(_blank_metrics(row))
    return rows


def _run_oracle_trial(cfg: ExperimentConfig, coords: dict, trial: int) -> list[dict]:
    import time

    seed = trial_seed(cfg.master_seed, cfg.task, coords, trial)
    n, p, kmax = coords["n"], coords["p"], coords["kmax"]
    inst = synthetic.generate_instance(
        n, p, min(kmax, p), seed, snr_db=cfg.grid.get("snr_db"), rho=coords["rho"]
    )
    size = 1 + trial % kmax
    rng = synthetic.stream(seed, "oracle-support")
    support = sorted(int(j) for j in rng.choice(p, size=size, replace=False))
    row = {"task": cfg.task, **coords, "size": size, "solver": "criteria",
           "trial": trial, "seed": seed, "error": ""}
    try:
        t0 = time.perf_counter_ns()
        state = least_squares_on_support(inst.X, inst.y, support)
        outside = [j for j in range(p) if j not in support]
        sel = criteria.optimal_selection(inst.X, state, outside)
        add = oracle.best_addition(inst.X, inst.y, support)
        row["agree_select"] = int(sel.best() in add.optimal_set)
        if size >= 2:
            elim = criteria.optimal_elimination(inst.X, inst.y, state)
            dele = oracle.best_deletion(inst.X, inst.y, support)
            row["agree_eliminate"] = int(elim.best() in dele.optimal_set)
        row["wall_time_ns"] = time.perf_counter_ns() - t0
    except Exception as e:  # noqa: BLE001
        row["error"] = f"{type(e).__name__}: {e}"
    return [_blank_metrics(row)]


_TRIAL_RUNNERS = {
    "recover": _run_recover_trial,
    "timing": _run_recover_trial,
    "regress": _run_regress_trial,
    "css": _run_css_trial,
    "oracle-check": _run_oracle_trial,
}


def _run_item(args):
    cfg, coords, trial = args
    return _TRIAL_RUNNERS[cfg.task](cfg, coords, trial)


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.17g}"
    if value is None:
        return ""
    return str(value)


def _write_csv(path: Path, columns: list[str], rows: list[dict]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(row.get(col, "")) for col in columns])


def _coord_key(cfg, row):
    coords = [c for c in _COLUMNS[cfg.task] if c not in
              ("task", "solver", "trial", "seed", "error", *_METRIC_FIELDS, "wall_time_ns")]
    return tuple(str(row.get(c, "")) for c in coords), coords


def aggregate_rows(cfg: ExperimentConfig, rows: list[dict]) -> tuple[list[str], list[dict]]:
    """Per (grid point, solver) summary, a pure function of the raw rows."""
    groups: dict[tuple, list[dict]] = {}
    coord_names = None
    for row in rows:
        key, coord_names = _coord_key(cfg, row)
        groups.setdefault((key, row["solver"]), []).append(row)
    out = []
    for (key, solver), members in sorted(groups.items()):
        agg = dict(zip(coord_names, key))
        agg["solver"] = solver
        agg["trials"] = len(members)
        agg["errors"] = sum(1 for m in members if m.get("error"))
        for metric in _METRIC_FIELDS:
            values = [m[metric] for m in members if m.get(metric) not in ("", None)]
            values = [float(v) for v in values]
            if not values:
                continue
            if metric in ("success", "agree_select", "agree_eliminate"):
                agg[f"{metric}_count"] = int(sum(values))
                agg[f"{metric}_rate"] = sum(values) / len(values)
            else:
                agg[f"{metric}_mean"] = float(np.mean(values))
                agg[f"{metric}_std"] = float(np.std(values))
        walls = [int(m["wall_time_ns"]) for m in members if m.get("wall_time_ns") not in ("", None)]
        if walls:
            agg["wall_time_ns_median"] = int(statistics.median_low(walls))
        out.append(agg)
    columns = list(dict.fromkeys(col for row in out for col in row))
    return columns, out


def emit_phase_grid(cfg: ExperimentConfig, rows: list[dict], out_dir: Path) -> list[Path]:
    """One matrix CSV per solver; cell = mean NMSE or success rate."""
    rows_axis, cols_axis = cfg.phase["rows"], cfg.phase["cols"]
    value = cfg.phase.get("value", "nmse")
    row_vals = sorted({row[rows_axis] for row in rows})
    col_vals = sorted({row[cols_axis] for row in rows})
    paths = []
    for solver in cfg.solvers:
        grid = []
        for rv in row_vals:
            line = []
            for cv in col_vals:
                cell = [
                    float(r[value]) for r in rows
                    if r["solver"] == solver and r[rows_axis] == rv and r[cols_axis] == cv
                    and r.get(value) not in ("", None)
                ]
                line.append(float(np.mean(cell)) if cell else math.nan)
            grid.append(line)
        path = out_dir / f"phase_{value}_{solver}.csv"
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow([f"{rows_axis}\\{cols_axis}", *[_fmt(c) for c in col_vals]])
            for rv, line in zip(row_vals, grid):
                writer.writerow([_fmt(rv), *[_fmt(v) for v in line]])
        paths.append(path)
    return paths


def _emit_timing_ratios(cfg, agg_rows, out_dir: Path) -> None:
    pairs = [("op", "omp"), ("cosaop", "cosamp"), ("op-bess", "bess"), ("ogp", "gp")]
    medians: dict[tuple, int] = {}
    for row in agg_rows:
        if "wall_time_ns_median" in row:
            key = tuple(v for k, v in row.items() if k not in
                        ("solver", "trials", "errors") and not k.endswith(("_mean", "_std", "_count", "_rate", "_median")))
            medians[(key, row["solver"])] = row["wall_time_ns_median"]
    lines = []
    cells = sorted({key for key, _ in medians})
    for cell in cells:
        for new, old in pairs:
            mn, mo = medians.get((cell, new)), medians.get((cell, old))
            if mn is not None and mo is not None and mo > 0:
                lines.append({"cell": "|".join(_fmt(v) for v in cell),
                              "optimal": new, "classical": old,
                              "optimal_ns": mn, "classical_ns": mo, "ratio": mn / mo})
    if lines:
        _write_csv(out_dir / "timing_ratios.csv",
                   ["cell", "optimal", "classical", "optimal_ns", "classical_ns", "ratio"], lines)


def run_experiment(cfg: ExperimentConfig, out_dir, threads: int = 1):
    """Execute the full grid and write results.csv plus aggregate.csv.

    Returns (results_rows, aggregate_rows). Deterministic up to wall-time
    columns for a fixed master seed.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    points = _grid_points(cfg)
    items = [(cfg, coords, trial) for coords in points for trial in range(cfg.trials)]
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(_run_item, items, chunksize=8))
    else:
        chunks = [_run_item(item) for item in items]
    rows = [row for chunk in chunks for row in chunk]
    coord_cols = [c for c in _COLUMNS[cfg.task]
                  if c not in ("task", "solver", "trial", "seed", "error",
                               *_METRIC_FIELDS, "wall_time_ns")]
    rows.sort(key=lambda r: ([str(r.get(c, "")) for c in coord_cols],
                             str(r.get("solver", "")), r["trial"]))
    _write_csv(out_dir / "results.csv", _COLUMNS[cfg.task], rows)
    agg_cols, agg = aggregate_rows(cfg, rows)
    _write_csv(out_dir / "aggregate.csv", agg_cols, agg)
    with open(out_dir / "run_meta.txt", "w") as fh:
        fh.write(f"schema={SCHEMA_VERSION}\ntask={cfg.task}\nmaster_seed={cfg.master_seed}\n")
        fh.write(f"trials={cfg.trials}\nsolvers={','.join(cfg.solvers)}\n")
    if cfg.phase is not None and cfg.task in ("recover", "timing"):
        emit_phase_grid(cfg, rows, out_dir)
    if cfg.task == "timing":
        _emit_timing_ratios(cfg, agg, out_dir)
    return rows, agg


def _all_failed(cfg, rows) -> bool:
    groups: dict[tuple, list] = {}
    for row in rows:
        key, _ = _coord_key(cfg, row)
        groups.setdefault((key, row.get("solver", "")), []).append(bool(row.get("error")))
    return any(all(errs) for errs in groups.values())


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="optpursuit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run an experiment grid from a TOML config")
    run_p.add_argument("config", type=Path)
    run_p.add_argument("--threads", type=int, default=None)
    run_p.add_argument("--out", type=Path, default=None)

    or_p = sub.add_parser("oracle-check", help="criteria-vs-exhaustive agreement check")
    or_p.add_argument("--n", type=int, required=True)
    or_p.add_argument("--p", type=int, required=True)
    or_p.add_argument("--kmax", type=int, required=True)
    or_p.add_argument("--trials", type=int, required=True)
    or_p.add_argument("--seed", type=int, required=True)
    or_p.add_argument("--rho", type=float, default=None)

    css_p = sub.add_parser("css", help="column subset selection on a CSV matrix")
    css_p.add_argument("--input", type=Path, required=True)
    css_p.add_argument("--k", type=int, required=True)
    css_p.add_argument("--variant", default="optimal-greedy",
                       choices=list(css_mod.CSS_VARIANTS) + ["leverage"])
    css_p.add_argument("--leverage-vectors", type=int, default=None)

    args = parser.parse_args(argv)

    if args.command == "run":
        try:
            cfg = load_config(args.config)
        except ConfigError as e:
            print(f"config error: {e}", file=sys.stderr)
            return 2
        threads = args.threads
        if threads is None:
            threads = int(os.environ.get("OPTPURSUIT_THREADS", "1"))
        out_dir = args.out or Path(cfg.output or "results")
        rows, _ = run_experiment(cfg, out_dir, threads=threads)
        n_err = sum(1 for r in rows if r.get("error"))
        print(f"wrote {len(rows)} rows to {out_dir}/results.csv ({n_err} errors)")
        if _all_failed(cfg, rows):
            print("numerical failure in all trials of some grid point", file=sys.stderr)
            return 3
        return 0

    if args.command == "oracle-check":
        cfg = parse_config({
            "task": "oracle-check",
            "trials": args.trials,
            "master_seed": args.seed,
            "grid": {"n": args.n, "p": args.p, "kmax": args.kmax,
                     **({"rho": args.rho} if args.rho is not None else {})},
        })
        rows = [row for coords in _grid_points(cfg)
                for t in range(cfg.trials)
                for row in _run_oracle_trial(cfg, coords, t)]
        sel = [r["agree_select"] for r in rows if r.get("agree_select") != ""]
        eli = [r["agree_eliminate"] for r in rows if r.get("agree_eliminate") != ""]
        frac_sel = sum(sel) / len(sel) if sel else float("nan")
        frac_eli = sum(eli) / len(eli) if eli else float("nan")
        print(f"selection agreement:   {frac_sel:.4f} ({len(sel)} checks)")
        print(f"elimination agreement: {frac_eli:.4f} ({len(eli)} checks)")
        errors = [r["error"] for r in rows if r.get("error")]
        if errors:
            print(f"{len(errors)} trial errors; first: {errors[0]}", file=sys.stderr)
            return 3
        return 0

    if args.command == "css":
        from .linalg import as_design

        X = as_design(np.loadtxt(args.input, delimiter=",", ndmin=2))
        if args.variant == "leverage":
            nv = args.leverage_vectors or min(X.shape)
            report = css_mod.leverage_score_baseline(X, args.k, nv)
        else:
            report = css_mod.css_solve(X, args.k, variant=args.variant)
        bound = css_mod.svd_rank_bound(X, args.k)
        print(f"support: {report.support}")
        print(f"relative error: {report.rel_error:.6g} (svd rank-{args.k} bound {bound:.6g})")
        return 0

    return 2


if __name__ == "__main__":
    sys.exit(main())
