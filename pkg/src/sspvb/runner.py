"""Orchestration behind the CLI: build the problem from a config, run optimizers, write artifacts.

CSV files carry no timings or other run-dependent text, so identical config and
seed give byte-identical CSVs. Floats are written with ``repr`` and read back
exactly.
"""

from __future__ import annotations

import csv
import logging
import math
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import _backend
from .config import RunConfig
from .data import generate_synthetic, ingest_dataset, load_bundled_year
from .model import AnnualDataset, Design
from .mopso import run_mopso
from .nsga2 import run_nsga2
from .pareto import Solution
from .sizing import (
    Evaluation,
    FrontEntry,
    ReliabilityConstrainedCost,
    SizingBounds,
    SizingProblem,
    SweepRow,
    default_bounds,
    dod_sweep,
    front_designs,
    grid_values,
    knee_point,
    solve_min_cost,
)
from .simulation import SimulationResult

log = logging.getLogger("sspvb")

ALGO_LABELS = {"mopso": "MOPSO", "nsga2": "NSGA-II"}
FRONT_COLUMNS = ("n_pv", "n_bes", "dod", "coe_usd_per_kwh", "llp_frac")
SURFACE_COLUMNS = ("dod", "coe_usd_per_kwh", "llp_frac")
SWEEP_COLUMNS = ("dod", "best_n_pv", "best_n_bes", "coe_usd_per_kwh", "llp_frac", "feasible")
TRACE_COLUMNS = ("hour", "pv_kw", "load_kw", "soc_kwh", "charged_kwh", "delivered_kwh",
                 "dumped_kwh", "deficit_kwh")


def fmt(x) -> str:
    """Shortest round-tripping text for a float."""
    return repr(float(x))


def percent(frac: float) -> str:
    return f"{100.0 * frac:.4f}"


def ensure_writable(out_dir) -> Path:
    """Create ``out_dir`` if needed and prove it accepts files; raises OSError otherwise."""
    out = Path(out_dir)
    if out.exists() and not out.is_dir():
        raise NotADirectoryError(f"output path is not a directory: {out}")
    out.mkdir(parents=True, exist_ok=True)
    probe = out / ".sspvb-write-test"
    try:
        probe.write_text("")
    finally:
        probe.unlink(missing_ok=True)
    return out


def build_dataset(cfg: RunConfig) -> AnnualDataset:
    d = cfg.data
    if d.source == "files":
        return ingest_dataset(d.weather, d.load)
    if d.source == "synthetic":
        return generate_synthetic(d.seed, d.days, d.peak_load_kw, d.latitude_factor)
    return load_bundled_year()


def build_bounds(cfg: RunConfig, dataset: AnnualDataset) -> SizingBounds:
    b = cfg.bounds
    auto = default_bounds(dataset, cfg.pv, cfg.battery)
    return SizingBounds(
        n_pv=(b.n_pv_min, auto.n_pv[1] if b.n_pv_max is None else b.n_pv_max),
        n_bes=(b.n_bes_min, auto.n_bes[1] if b.n_bes_max is None else b.n_bes_max),
        dod=(b.dod_min, b.dod_max),
        dod_step=b.dod_step,
    )


def build_problem(cfg: RunConfig, dataset: AnnualDataset | None = None) -> SizingProblem:
    dataset = build_dataset(cfg) if dataset is None else dataset
    return SizingProblem(dataset, cfg.pv, cfg.battery, cfg.cost, build_bounds(cfg, dataset),
                         coe_energy=cfg.problem.coe_energy)


def algo_params(cfg: RunConfig, algo: str):
    if algo == "mopso":
        return cfg.mopso.params(cfg.run.seed, cfg.run.workers)
    if algo == "nsga2":
        return cfg.nsga2.params(cfg.run.seed, cfg.run.workers)
    raise ValueError(f"unknown algorithm {algo!r}")


def run_front(problem, algo: str, params) -> list[Solution]:
    if algo == "mopso":
        return list(run_mopso(problem, params))
    if algo == "nsga2":
        return run_nsga2(problem, params)
    raise ValueError(f"unknown algorithm {algo!r}")


@dataclass
class AlgoOutcome:
    algo: str
    front: list[FrontEntry]
    knee: FrontEntry
    best: Evaluation
    timings: dict[str, float]


def best_at_epsilon(problem: SizingProblem, front: list[FrontEntry], constrained: Evaluation,
                    epsilon: float) -> Evaluation:
    """Cheapest design with LLP <= epsilon among the constrained optimum and the front.

    If nothing meets epsilon, the constrained optimum (least violation) is returned.
    """
    best = constrained
    for entry in front:
        if entry.llp <= epsilon and (best.llp > epsilon or entry.coe < best.coe):
            best = problem.evaluate_design(entry.design)
    return best


def optimize(problem: SizingProblem, algo: str, params, epsilon: float = 0.0) -> AlgoOutcome:
    """Full two-objective front plus an epsilon-constrained cost minimization, same budget."""
    t0 = time.perf_counter()
    solutions = run_front(problem, algo, params)
    t1 = time.perf_counter()
    knee_sol = knee_point(solutions)
    front = front_designs(problem, solutions)
    knee = FrontEntry(problem.decode(knee_sol.x), float(knee_sol.f[0]), float(knee_sol.f[1]))
    constrained = solve_min_cost(ReliabilityConstrainedCost(problem, epsilon), algo, params)
    t2 = time.perf_counter()
    best = best_at_epsilon(problem, front, constrained, epsilon)
    return AlgoOutcome(algo, front, knee, best, {"front": t1 - t0, "constrained": t2 - t1})


# --- writers -----------------------------------------------------------------

def _write_rows(path: Path, header, rows) -> Path:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    return path


def write_front_csv(path, front: list[FrontEntry]) -> Path:
    rows = ((e.design.n_pv, e.design.n_bes, fmt(e.design.dod), fmt(e.coe), fmt(e.llp)) for e in front)
    return _write_rows(Path(path), FRONT_COLUMNS, rows)


def surface_rows(front: list[FrontEntry]):
    ordered = sorted(front, key=lambda e: (e.design.dod, e.coe, e.llp))
    return [(fmt(e.design.dod), fmt(e.coe), fmt(e.llp)) for e in ordered]


def write_surface_csv(path, front: list[FrontEntry]) -> Path:
    return _write_rows(Path(path), SURFACE_COLUMNS, surface_rows(front))


def write_sweep_csv(path, rows: list[SweepRow]) -> Path:
    out = ((fmt(r.dod), r.best_n_pv, r.best_n_bes, fmt(r.coe), fmt(r.llp), int(r.feasible)) for r in rows)
    return _write_rows(Path(path), SWEEP_COLUMNS, out)


def write_trace_csv(path, result: SimulationResult, dataset: AnnualDataset) -> Path:
    rows = (
        (t, fmt(result.pv_output[t]), fmt(dataset.load[t]), fmt(result.soc[t]), fmt(result.charged[t]),
         fmt(result.delivered[t]), fmt(result.surplus_dumped[t]), fmt(result.deficit[t]))
        for t in range(result.hours)
    )
    return _write_rows(Path(path), TRACE_COLUMNS, rows)


def read_front_csv(path) -> list[FrontEntry]:
    """Inverse of :func:`write_front_csv`; DOD bounds are not stored so none are enforced."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != FRONT_COLUMNS:
            raise ValueError(f"{path}: expected columns {','.join(FRONT_COLUMNS)}")
        return [
            FrontEntry(Design(int(r["n_pv"]), int(r["n_bes"]), float(r["dod"]), dod_bounds=(0.0, 1.0)),
                       float(r["coe_usd_per_kwh"]), float(r["llp_frac"]))
            for r in reader
        ]


# --- summaries ---------------------------------------------------------------

def _design_line(design: Design, coe: float, llp: float) -> str:
    return (f"n_pv={design.n_pv} n_bes={design.n_bes} dod={percent(design.dod)} % "
            f"COE={coe:.5f} USD/kWh LLP={percent(llp)} %")


def comparison_table(outcomes: list[AlgoOutcome], epsilon: float) -> list[str]:
    lines = [f"best COE at LLP <= {percent(epsilon)} %:",
             f"  {'method':<8} {'DOD (%)':>8} {'N_PV':>6} {'N_BES':>6} {'COE (USD/kWh)':>14} {'LLP (%)':>9}"]
    for o in outcomes:
        d = o.best.design
        flag = "" if o.best.llp <= epsilon else "  (infeasible)"
        lines.append(f"  {ALGO_LABELS[o.algo]:<8} {100 * d.dod:>8.2f} {d.n_pv:>6} {d.n_bes:>6} "
                     f"{o.best.coe:>14.5f} {percent(o.best.llp):>9}{flag}")
    if len(outcomes) == 2:
        a, b = (o.best.coe for o in outcomes)
        if math.isfinite(a) and math.isfinite(b):
            lines.append(f"  relative COE difference: {100 * abs(a - b) / min(a, b):.3f} %")
    return lines


def summary_text(cfg: RunConfig, problem: SizingProblem, outcomes: list[AlgoOutcome],
                 sweeps: dict[str, list[SweepRow]] | None = None) -> str:
    ds = problem.dataset
    b = problem.bounds
    lines = [
        "sspvb run summary",
        f"seed: {cfg.run.seed}",
        f"workers: {cfg.run.workers}",
        f"dispatch backend: {_backend.BACKEND}",
        f"dataset: {cfg.data.source}, {ds.hours} h, total load {ds.total_load:.3f} kWh, peak {ds.peak_load:.3f} kW",
        f"bounds: n_pv {list(b.n_pv)}, n_bes {list(b.n_bes)}, dod {list(b.dod)} step {b.dod_step}",
        f"epsilon: LLP <= {percent(cfg.problem.epsilon)} %",
        "",
        "parameters:",
    ]
    lines += [f"  {k} = {v}" for k, v in cfg.flat().items()]
    lines += ["", "timings (s):"]
    for o in outcomes:
        lines += [f"  {o.algo} {k}: {v:.3f}" for k, v in o.timings.items()]
    lines += ["", "knee point (minimum normalized distance to the ideal point):"]
    for o in outcomes:
        lines.append(f"  {ALGO_LABELS[o.algo]}: {_design_line(o.knee.design, o.knee.coe, o.knee.llp)}"
                     f" ({len(o.front)} front points)")
    if len(outcomes) == 2:
        lines.append(f"  knee DOD difference: {100 * abs(outcomes[0].knee.design.dod - outcomes[1].knee.design.dod):.2f}"
                     " percentage points")
    lines += [""] + comparison_table(outcomes, cfg.problem.epsilon)
    for algo, rows in (sweeps or {}).items():
        lines += ["", f"DOD sweep ({ALGO_LABELS[algo]}):"] + sweep_table(rows)
    return "\n".join(lines) + "\n"


def sweep_table(rows: list[SweepRow]) -> list[str]:
    lines = [f"  {'DOD (%)':>8} {'N_PV':>6} {'N_BES':>6} {'COE (USD/kWh)':>14} {'LLP (%)':>9} feasible"]
    for r in rows:
        lines.append(f"  {100 * r.dod:>8.2f} {r.best_n_pv:>6} {r.best_n_bes:>6} {r.coe:>14.5f} "
                     f"{percent(r.llp):>9} {'yes' if r.feasible else 'NO'}")
    feasible = [r for r in rows if r.feasible]
    if feasible:
        best = min(feasible, key=lambda r: r.coe)
        lines.append(f"  optimum: DOD {100 * best.dod:.2f} %, COE {best.coe:.5f} USD/kWh")
    return lines


# --- entry points ------------------------------------------------------------

def run_sweep(cfg: RunConfig, problem: SizingProblem | None = None, out_dir=None) -> dict[str, list[SweepRow]]:
    """DOD sweep for each configured algorithm; writes ``sweep_<algo>.csv`` when ``out_dir`` is given."""
    if out_dir is not None:
        out_dir = ensure_writable(out_dir)
    problem = build_problem(cfg) if problem is None else problem
    dods = grid_values(cfg.sweep.dod_from, cfg.sweep.dod_to, cfg.sweep.dod_step)
    results = {}
    for algo in cfg.run.algorithms:
        log.info("sweep %s over %d DOD values", algo, len(dods))
        rows = dod_sweep(problem, dods, cfg.problem.epsilon, algo, algo_params(cfg, algo))
        results[algo] = rows
        if out_dir is not None:
            write_sweep_csv(out_dir / f"sweep_{algo}.csv", rows)
    return results


def run(cfg: RunConfig, out_dir=None) -> dict[str, Path]:
    """Optimize with the configured algorithm(s) and write fronts, surfaces and a summary.

    Also runs the DOD sweep when ``sweep.enabled`` is set.
    """
    out = ensure_writable(cfg.run.out if out_dir is None else out_dir)
    problem = build_problem(cfg)
    outcomes = []
    written = {}
    for algo in cfg.run.algorithms:
        log.info("optimizing with %s", algo)
        outcome = optimize(problem, algo, algo_params(cfg, algo), cfg.problem.epsilon)
        outcomes.append(outcome)
        written[f"front_{algo}"] = write_front_csv(out / f"front_{algo}.csv", outcome.front)
        written[f"surface_{algo}"] = write_surface_csv(out / f"surface_{algo}.csv", outcome.front)
    sweeps = None
    if cfg.sweep.enabled:
        sweeps = run_sweep(cfg, problem, out)
        written.update({f"sweep_{a}": out / f"sweep_{a}.csv" for a in sweeps})
    summary = out / "summary.txt"
    summary.write_text(summary_text(cfg, problem, outcomes, sweeps))
    written["summary"] = summary
    return written


def report(run_dir) -> dict[str, Path]:
    """Rebuild surface CSVs and a knee-point report from the front CSVs of a prior run."""
    run_dir = Path(run_dir)
    fronts = sorted(run_dir.glob("front_*.csv"))
    if not fronts:
        raise FileNotFoundError(f"no front_*.csv files in {run_dir}")
    ensure_writable(run_dir)
    written = {}
    lines = ["sspvb report", ""]
    combined = []
    for path in fronts:
        algo = path.stem.removeprefix("front_")
        front = read_front_csv(path)
        written[f"surface_{algo}"] = write_surface_csv(run_dir / f"surface_{algo}.csv", front)
        combined += [(algo, *row) for row in surface_rows(front)]
        if front:
            sols = [Solution(np.array([e.design.n_pv, e.design.n_bes, e.design.dod]), np.array([e.coe, e.llp]))
                    for e in front]
            k = front[sols.index(knee_point(sols))]
            lines.append(f"{algo}: {len(front)} front points; knee {_design_line(k.design, k.coe, k.llp)}")
        else:
            lines.append(f"{algo}: empty front")
    written["surface_all"] = _write_rows(run_dir / "surface_all.csv", ("algo",) + SURFACE_COLUMNS, combined)
    rep = run_dir / "report.txt"
    rep.write_text("\n".join(lines) + "\n")
    written["report"] = rep
    return written
