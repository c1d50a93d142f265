"""``sspvb`` command-line interface.

Exit status is 0 on success, 1 on any handled error and 2 on usage errors.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import runner
from .config import ConfigError, load_config
from .data import BUNDLED_LATITUDE_FACTOR, BUNDLED_PEAK_LOAD_KW, BUNDLED_SEED, generate_synthetic, write_dataset
from .economics import battery_life_years
from .model import Design
from .simulation import compute_llp, simulate
from .sizing import BRUTE_FORCE_CAP, brute_force_front, grid_values


def _parse_set(items) -> dict[str, str]:
    values = {}
    for item in items or ():
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        key, _, value = item.partition("=")
        values[key.strip()] = value.strip()
    return values


def _config(args, **overrides):
    values = _parse_set(getattr(args, "set", None))
    values.update({k: str(v) for k, v in overrides.items() if v is not None})
    return load_config(args.config, overrides=values)


def parse_grid(spec: str) -> dict[str, list[float]]:
    """Parse ``n_pv=0:20:1,n_bes=0:10:1,dod=0.2:0.8:0.1`` (``lo:hi:step`` or a single value)."""
    grid = {}
    for part in spec.split(","):
        name, sep, rng = part.partition("=")
        name = name.strip()
        if not sep or name not in ("n_pv", "n_bes", "dod"):
            raise ValueError(f"bad grid entry {part!r}; expected n_pv=, n_bes= or dod=")
        fields = [float(v) for v in rng.split(":")]
        if len(fields) == 1:
            grid[name] = fields
        elif len(fields) == 3:
            grid[name] = grid_values(*fields)
        else:
            raise ValueError(f"bad grid range {rng!r}; expected lo:hi:step")
    missing = {"n_pv", "n_bes", "dod"} - grid.keys()
    if missing:
        raise ValueError(f"grid is missing {', '.join(sorted(missing))}")
    return grid


def cmd_optimize(args) -> int:
    cfg = _config(args, **{"run.algo": args.algo, "run.seed": args.seed, "run.out": args.out,
                           "run.workers": args.workers, "problem.epsilon": args.epsilon})
    written = runner.run(cfg)
    sys.stdout.write(written["summary"].read_text())
    return 0


def cmd_sweep(args) -> int:
    cfg = _config(args, **{"sweep.dod_from": args.dod_from, "sweep.dod_to": args.dod_to,
                           "sweep.dod_step": args.dod_step, "problem.epsilon": args.epsilon,
                           "run.algo": args.algo, "run.seed": args.seed, "run.out": args.out,
                           "run.workers": args.workers})
    out = runner.ensure_writable(cfg.run.out)
    results = runner.run_sweep(cfg, out_dir=out)
    for algo, rows in results.items():
        print(f"DOD sweep ({runner.ALGO_LABELS[algo]}), LLP <= {runner.percent(cfg.problem.epsilon)} %:")
        print("\n".join(runner.sweep_table(rows)))
    return 0


def cmd_simulate(args) -> int:
    cfg = _config(args)
    out = Path(args.out)
    runner.ensure_writable(out.parent if str(out.parent) else ".")
    problem = runner.build_problem(cfg)
    design = Design(args.n_pv, args.n_bes, args.dod, dod_bounds=problem.bounds.dod)
    result = simulate(design, problem.dataset, cfg.pv, cfg.battery, pv_unit=problem.pv_unit)
    runner.write_trace_csv(out, result, problem.dataset)
    ev = problem.evaluate_design(design)
    print(f"design: n_pv={design.n_pv} n_bes={design.n_bes} dod={runner.percent(design.dod)} %")
    print(f"LLP: {runner.percent(compute_llp(result))} %")
    print(f"COE: {ev.coe:.6f} USD/kWh")
    print(f"battery life: {battery_life_years(result, design, cfg.battery):.3f} years")
    print(f"trace: {out}")
    return 0


def cmd_gen_data(args) -> int:
    out = runner.ensure_writable(args.out)
    ds = generate_synthetic(args.seed, args.days, args.peak_load, args.latitude_factor)
    write_dataset(ds, out / "weather.csv", out / "load.csv")
    print(f"wrote {ds.hours} hours to {out / 'weather.csv'} and {out / 'load.csv'}")
    return 0


def cmd_brute_force(args) -> int:
    cfg = _config(args, **{"run.out": args.out, "run.workers": args.workers})
    out = runner.ensure_writable(cfg.run.out)
    grid = parse_grid(args.grid)
    problem = runner.build_problem(cfg)
    points = brute_force_front(problem, grid, cap=args.cap, workers=cfg.run.workers)
    entries = sorted((runner.FrontEntry(d, float(f[0]), float(f[1])) for d, f in points),
                     key=lambda e: (e.coe, e.llp, e.design.n_pv, e.design.n_bes, e.design.dod))
    path = runner.write_front_csv(out / "front_brute_force.csv", entries)
    print(f"{len(entries)} non-dominated designs written to {path}")
    return 0


def cmd_report(args) -> int:
    written = runner.report(args.run)
    sys.stdout.write(written["report"].read_text())
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sspvb", description="Standalone PV/battery sizing optimizer.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="key=value config file")
        p.add_argument("--set", action="append", metavar="KEY=VALUE", help="override one config key")
        p.add_argument("--seed", type=int)
        p.add_argument("--workers", type=int)
        p.add_argument("--out", help="output directory")

    p = sub.add_parser("optimize", help="Pareto fronts, knee points and a cost comparison")
    common(p)
    p.add_argument("--algo", choices=("mopso", "nsga2", "both"))
    p.add_argument("--epsilon", type=float, help="LLP limit (fraction) for the cost comparison")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("sweep-dod", help="cheapest design with LLP <= epsilon at each fixed DOD")
    common(p)
    p.add_argument("--from", dest="dod_from", type=float)
    p.add_argument("--to", dest="dod_to", type=float)
    p.add_argument("--step", dest="dod_step", type=float)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--algo", choices=("mopso", "nsga2", "both"))
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("simulate", help="hourly trace of one design")
    p.add_argument("--config")
    p.add_argument("--set", action="append", metavar="KEY=VALUE")
    p.add_argument("--n-pv", type=int, required=True)
    p.add_argument("--n-bes", type=int, required=True)
    p.add_argument("--dod", type=float, required=True)
    p.add_argument("--out", default="trace.csv", help="trace CSV path")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("gen-data", help="write a synthetic weather/load pair")
    p.add_argument("--seed", type=int, default=BUNDLED_SEED)
    p.add_argument("--days", type=int, default=365)
    p.add_argument("--peak-load", type=float, default=BUNDLED_PEAK_LOAD_KW)
    p.add_argument("--latitude-factor", type=float, default=BUNDLED_LATITUDE_FACTOR)
    p.add_argument("--out", default=".", help="output directory")
    p.set_defaults(func=cmd_gen_data)

    p = sub.add_parser("brute-force", help="exact Pareto set over a design grid")
    common(p)
    p.add_argument("--grid", required=True, help="e.g. n_pv=0:20:1,n_bes=0:10:1,dod=0.2:0.8:0.1")
    p.add_argument("--cap", type=int, default=BRUTE_FORCE_CAP)
    p.set_defaults(func=cmd_brute_force)

    p = sub.add_parser("report", help="surface CSVs and knee points from a prior run directory")
    p.add_argument("--run", required=True, help="directory holding front_*.csv")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except (ValueError, OSError, RuntimeError, LookupError) as exc:
        print(f"sspvb: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
