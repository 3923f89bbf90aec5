"""Command-line entry point: ``snsga bench|trace|schedule ...``."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import timetable as tt
from .benchmarks import get_benchmark, registry, resolve_suite
from .core import StructuralError
from .driver import SnsgaConfig, run
from .harness import (
    ConfigParseError,
    compare_reference,
    convergence_series,
    format_gap,
    load_config,
    run_campaign,
    write_series,
    _write_csv,
)
from .reference import ReferenceTable

OUT_ENV = "SNSGA_OUT"

log = logging.getLogger("snsga")


def _out_dir(value, default_name):
    if value:
        return Path(value)
    return Path(os.environ.get(OUT_ENV, "results")) / default_name


def _config(args) -> SnsgaConfig:
    return load_config(args.config) if getattr(args, "config", None) else SnsgaConfig()


def cmd_bench_list(args) -> int:
    specs = registry()
    if args.json:
        print(json.dumps([s.to_dict() for s in specs], indent=2))
        return 0
    print(f"{'name':<5} {'label':<8} {'n':>3}  {'optimum':>20}  bounds")
    for s in specs:
        b = s.problem.bounds
        box = f"[{b[0, 0]:g}, {b[0, 1]:g}]^{len(b)}" if (b == b[0]).all() else \
            " x ".join(f"[{lo:g}, {hi:g}]" for lo, hi in b)
        print(f"{s.name:<5} {s.label:<8} {s.problem.dimension:>3}  {s.known_optimum_value:>20.12g}  {box}")
    return 0


def cmd_bench_run(args) -> int:
    config = _config(args)
    specs = resolve_suite(args.suite)
    out = _out_dir(args.out, "campaign")
    reports, _ = run_campaign([s.name for s in specs], args.trials, config, args.seed,
                              full_run=args.full_runs, workers=args.workers, out_dir=out)
    table = ReferenceTable()
    print(f"{'bench':<5} {'success %':>9} {'mean evals':>11} {'mean gap':>10} {'published':>10}")
    for r in reports:
        evals = "-" if r.mean_evaluations_successful is None else f"{r.mean_evaluations_successful:.0f}"
        claim = table.snsga.get(r.benchmark, (None, "-"))[1]
        print(f"{r.benchmark:<5} {r.success_rate:>9.0f} {evals:>11} {format_gap(r.mean_gap_successful):>10} {claim:>10}")
    print(f"wrote {out}/trials.jsonl, report.csv, comparison.csv")
    return 0


def cmd_trace(args) -> int:
    spec = get_benchmark(args.benchmark)
    config = _config(args).replace(rng_seed=args.seed)
    result = run(spec.problem, config)
    rows = convergence_series(result)
    out = Path(args.out) if args.out else _out_dir(None, f"trace_{spec.name}_{args.seed}.csv")
    out.parent.mkdir(parents=True, exist_ok=True)
    write_series(out, rows, header=("generation", "nof"))
    print(f"{spec.name}: best {result.best_objective:.10g} after {result.evaluations_used} evaluations; "
          f"{len(rows)} points written to {out}")
    return 0


def _solve(instance, config, seed):
    problem = tt.encode(instance)
    result = run(problem, config.replace(rng_seed=seed))
    return tt.decode(instance, result.best_point), result


def _write_schedule(out: Path, prefix: str, instance, schedule) -> None:
    _write_csv(out / f"{prefix}schedule.csv", tt.schedule_rows(instance, schedule))
    write_series(out / f"{prefix}trace.csv", tt.objective_trace(instance, schedule),
                 header=("slot", "objective"))


def _print_schedule(title, instance, schedule) -> None:
    print(title)
    for row in tt.schedule_rows(instance, schedule):
        where = f"{row['rig']} [{row['start']}, {row['end']})" if row["rig"] else "unassigned"
        print(f"  {row['user']:<8} {row['rig_type']:<8} {where}")
    trace = [int(f) if float(f).is_integer() else f for _, f in tt.objective_trace(instance, schedule)]
    print(f"  f(t) = {trace}")
    print(f"  total = {tt.total_objective(instance, schedule):g}")


def cmd_schedule_solve(args) -> int:
    instance = tt.load_instance(args.instance)
    schedule, result = _solve(instance, _config(args), args.seed)
    out = _out_dir(args.out, f"schedule_{instance.name}")
    out.mkdir(parents=True, exist_ok=True)
    _write_schedule(out, "", instance, schedule)
    _print_schedule(f"{instance.name}: {result.evaluations_used} evaluations", instance, schedule)
    print(f"wrote {out}/schedule.csv, trace.csv")
    return 0


def cmd_schedule_demo(args) -> int:
    instance = tt.lab_scenario()
    arrival = tt.first_come_first_served(instance)
    _print_schedule("arrival order (first come, first served):", instance, arrival)
    optimized, result = _solve(instance, _config(args), args.seed)
    _print_schedule(f"optimized ({result.evaluations_used} evaluations):", instance, optimized)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        _write_schedule(out, "arrival_", instance, arrival)
        _write_schedule(out, "optimized_", instance, optimized)
        (out / "instance.json").write_text(json.dumps(tt.instance_to_dict(instance), indent=2))
        print(f"wrote {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="snsga", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    bench = sub.add_parser("bench", help="benchmark registry and campaigns")
    bench_sub = bench.add_subparsers(dest="bench_command", required=True)
    p = bench_sub.add_parser("list", help="print the benchmark registry")
    p.add_argument("--json", action="store_true", help="emit the registry as JSON")
    p.set_defaults(func=cmd_bench_list)
    p = bench_sub.add_parser("run", help="seeded success-rate campaign")
    p.add_argument("--suite", default="all", help="comma-separated names or 'all'")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0, help="base seed; trial i uses seed + i")
    p.add_argument("--config", help="key = value file overriding the default parameters")
    p.add_argument("--out", help=f"output directory (default ${OUT_ENV}/campaign)")
    p.add_argument("--full-runs", action="store_true",
                   help="run to the generation limit, recording first-success counts too")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_bench_run)

    p = sub.add_parser("trace", help="normalized convergence trace of one run")
    p.add_argument("--benchmark", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--config")
    p.add_argument("--out", help="CSV file")
    p.set_defaults(func=cmd_trace)

    sched = sub.add_parser("schedule", help="remote-lab timetabling")
    sched_sub = sched.add_subparsers(dest="schedule_command", required=True)
    p = sched_sub.add_parser("solve", help="optimize an instance file")
    p.add_argument("--instance", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--config")
    p.add_argument("--out")
    p.set_defaults(func=cmd_schedule_solve)
    p = sched_sub.add_parser("demo", help="built-in three-rig-type, four-user scenario")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--config")
    p.add_argument("--out")
    p.set_defaults(func=cmd_schedule_demo)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ConfigParseError, tt.InstanceParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (KeyError, StructuralError, FileNotFoundError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
