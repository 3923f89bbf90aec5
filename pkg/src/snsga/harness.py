"""Batch experiments: success classification, statistics, traces, reports."""

from __future__ import annotations

import csv
import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Iterable, List, Optional, Sequence

import numpy as np

from .benchmarks import BenchmarkSpec, get_benchmark
from .core import NumericalFailure
from .driver import RunResult, SnsgaConfig, run
from .reference import COLUMN_LABELS, ReferenceTable

log = logging.getLogger(__name__)

REL_TOL = 1e-4
ABS_TOL = 1e-6


def success_threshold(fobj_init: float) -> float:
    return REL_TOL * abs(fobj_init) + ABS_TOL


def is_success(fobj_alg: float, fobj_anal: float, fobj_init: float) -> bool:
    """``|alg - anal| < 1e-4 |init| + 1e-6`` (strict)."""
    return bool(abs(fobj_alg - fobj_anal) < success_threshold(fobj_init))


def normalize_trace(trace: Sequence[float]) -> List[float]:
    """Min-max scale a trace to [0, 1]; a flat trace maps to zeros."""
    values = np.asarray(trace, dtype=float)
    if values.size == 0:
        raise ValueError("trace must be non-empty")
    lo, hi = values.min(), values.max()
    if hi == lo:
        return [0.0] * values.size
    return np.clip((values - lo) / (hi - lo), 0.0, 1.0).tolist()


@dataclass
class TrialOutcome:
    benchmark: str
    seed: int
    success: bool
    evaluations: int
    gap: Optional[float]
    fobj_alg: Optional[float] = None
    fobj_anal: Optional[float] = None
    fobj_init: Optional[float] = None
    termination: str = ""
    generations: int = 0
    evaluations_full: Optional[int] = None
    best_point: Optional[List[float]] = None
    error: Optional[str] = None
    run_result: Optional[RunResult] = field(default=None, repr=False, compare=False)

    def to_record(self) -> dict:
        data = {f.name: getattr(self, f.name) for f in fields(self) if f.name != "run_result"}
        return data

    @classmethod
    def from_record(cls, data: dict) -> "TrialOutcome":
        names = {f.name for f in fields(cls)} - {"run_result"}
        return cls(**{k: v for k, v in data.items() if k in names})


@dataclass
class BenchmarkReport:
    benchmark: str
    trials: int
    successes: int
    success_rate: float
    mean_evaluations_successful: Optional[float]
    mean_gap_successful: Optional[float]
    mean_evaluations_full: Optional[float] = None

    def to_row(self) -> dict:
        return asdict(self)


def aggregate(benchmark: str, outcomes: Sequence[TrialOutcome]) -> BenchmarkReport:
    """Fold trial outcomes (in the given order) into one report."""
    outcomes = list(outcomes)
    if not outcomes:
        raise ValueError(f"{benchmark}: no trials to aggregate")
    good = [o for o in outcomes if o.success]
    full = [o.evaluations_full for o in outcomes if o.evaluations_full is not None]
    return BenchmarkReport(
        benchmark=benchmark,
        trials=len(outcomes),
        successes=len(good),
        success_rate=100.0 * len(good) / len(outcomes),
        mean_evaluations_successful=float(np.mean([o.evaluations for o in good])) if good else None,
        mean_gap_successful=float(np.mean([o.gap for o in good])) if good else None,
        mean_evaluations_full=float(np.mean(full)) if full else None,
    )


def run_trial(spec: BenchmarkSpec, config: SnsgaConfig, seed: int, full_run: bool = False,
              keep_result: bool = False) -> TrialOutcome:
    """One seeded run that stops as soon as the success test holds.

    With ``full_run`` the run continues to its normal end; ``evaluations``
    is then the count at first success (or the total when never successful)
    and ``evaluations_full`` the total.
    """
    anal = spec.known_optimum_value

    def rule(best, init):
        return is_success(best, anal, init)

    config = config.replace(rng_seed=seed)
    try:
        result = run(spec.problem, config, stop_rule=rule, stop_on_target=not full_run)
    except NumericalFailure as exc:
        log.warning("%s seed %d: %s", spec.name, seed, exc)
        return TrialOutcome(spec.name, seed, False, 0, None, fobj_anal=anal,
                            termination="error", error=str(exc))
    success = is_success(result.best_objective, anal, result.initial_mean_objective)
    evaluations = result.evaluations_used
    if full_run and result.evaluations_at_target is not None:
        evaluations = result.evaluations_at_target
    return TrialOutcome(
        benchmark=spec.name,
        seed=seed,
        success=success,
        evaluations=evaluations,
        gap=abs(result.best_objective - anal),
        fobj_alg=result.best_objective,
        fobj_anal=anal,
        fobj_init=result.initial_mean_objective,
        termination=result.termination,
        generations=result.generations_used,
        evaluations_full=result.evaluations_used if full_run else None,
        best_point=[float(v) for v in result.best_point],
        run_result=result if keep_result else None,
    )


def _trial_job(args):
    name, config, seed, full_run = args
    return run_trial(get_benchmark(name), config, seed, full_run)


def run_campaign(names: Iterable[str], trials: int, config: SnsgaConfig = SnsgaConfig(),
                 base_seed: int = 0, full_run: bool = False, workers: int = 1,
                 out_dir=None, specs: Optional[Sequence[BenchmarkSpec]] = None):
    """Run ``trials`` seeded trials per benchmark (seed = base_seed + index).

    Returns ``(reports, outcomes)``.  ``specs`` overrides registry lookup (for
    synthetic problems).  When ``out_dir`` is given the trial records,
    reports and reference comparisons are written there.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if specs is None:
        specs = [get_benchmark(n) for n in names]
    reports, outcomes = [], []
    for spec in specs:
        seeds = [base_seed + i for i in range(trials)]
        if workers > 1:
            with ProcessPoolExecutor(workers) as pool:
                batch = list(pool.map(_trial_job, [(spec.name, config, s, full_run) for s in seeds]))
        else:
            batch = [run_trial(spec, config, s, full_run) for s in seeds]
        reports.append(aggregate(spec.name, batch))
        outcomes.extend(batch)
        log.info("%s: %.0f%% success", spec.name, reports[-1].success_rate)
    if out_dir is not None:
        write_campaign(out_dir, reports, outcomes)
    return reports, outcomes


def reports_from_records(outcomes: Sequence[TrialOutcome]) -> List[BenchmarkReport]:
    order: List[str] = []
    groups = {}
    for o in outcomes:
        if o.benchmark not in groups:
            order.append(o.benchmark)
            groups[o.benchmark] = []
        groups[o.benchmark].append(o)
    return [aggregate(name, groups[name]) for name in order]


def compare_reference(report: BenchmarkReport, table: Optional[ReferenceTable] = None) -> List[dict]:
    """Our mean evaluation count next to every published figure for the benchmark."""
    table = table or ReferenceTable()
    name = report.benchmark
    if not table.has(name):
        raise KeyError(f"no published figures for benchmark {name!r}")
    rows = []
    column = table.column(name)
    for algorithm, value in column.items():
        if algorithm == "SNSGA":
            continue
        if value is not None:
            rows.append({"benchmark": name, "algorithm": algorithm, "evaluations": value,
                         "source": "published"})
    claim = column.get("SNSGA")
    if claim is None and name in table.snsga:
        claim = table.snsga[name][1]
    if claim is not None:
        rows.append({"benchmark": name, "algorithm": "SNSGA", "evaluations": claim,
                     "source": "published"})
    rows.append({"benchmark": name, "algorithm": "SNSGA (this run)",
                 "evaluations": report.mean_evaluations_successful, "source": "measured"})
    return rows


# -- persistence --------------------------------------------------------------

def _write_csv(path: Path, rows: List[dict]) -> None:
    if not rows:
        path.write_text("")
        return
    with path.open("w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0]))
        writer.writeheader()
        for row in rows:
            writer.writerow({k: "" if v is None else v for k, v in row.items()})


def write_trials(path, outcomes: Sequence[TrialOutcome]) -> None:
    with Path(path).open("w") as fh:
        for o in outcomes:
            fh.write(json.dumps(o.to_record(), sort_keys=True) + "\n")


def load_trials(path) -> List[TrialOutcome]:
    with Path(path).open() as fh:
        return [TrialOutcome.from_record(json.loads(line)) for line in fh if line.strip()]


def write_campaign(out_dir, reports: Sequence[BenchmarkReport], outcomes: Sequence[TrialOutcome]) -> None:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_trials(out / "trials.jsonl", outcomes)
    rows = []
    for r in reports:
        row = r.to_row()
        row["label"] = COLUMN_LABELS.get(r.benchmark, r.benchmark)
        rows.append(row)
    _write_csv(out / "report.csv", rows)
    table = ReferenceTable()
    comparison = []
    for r in reports:
        if table.has(r.benchmark):
            comparison.extend(compare_reference(r, table))
    _write_csv(out / "comparison.csv", comparison)


def convergence_series(result: RunResult) -> List[tuple]:
    """``(generation, normalized best objective)`` pairs for plotting."""
    gens = [rec.generation for rec in result.trace]
    nof = normalize_trace([rec.best_objective for rec in result.trace])
    return list(zip(gens, nof))


def write_series(path, rows: Sequence[tuple], header=("index", "value")) -> None:
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for index, value in rows:
            writer.writerow([index, repr(float(value))])


# -- config files -------------------------------------------------------------

class ConfigParseError(ValueError):
    pass


def parse_config(text: str, source: str = "<config>") -> SnsgaConfig:
    """Parse ``key = value`` lines into an :class:`SnsgaConfig`.

    Blank lines and ``#`` comments are ignored; omitted keys keep their
    defaults; ``none`` clears an optional field.
    """
    types = {f.name: f.type for f in fields(SnsgaConfig)}
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        for sep in ("=", ":"):
            if sep in line:
                key, value = (s.strip() for s in line.split(sep, 1))
                break
        else:
            raise ConfigParseError(f"{source}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        if key not in types:
            raise ConfigParseError(f"{source}:{lineno}: unknown key {key!r}")
        kind = str(types[key])
        try:
            if value.lower() in ("none", "null", "") and "Optional" in kind:
                values[key] = None
            elif "int" in kind:
                number = float(value)
                if not number.is_integer():
                    raise ValueError(f"{value!r} is not an integer")
                values[key] = int(number)
            else:
                values[key] = float(value)
        except ValueError as exc:
            raise ConfigParseError(f"{source}:{lineno}: bad value for {key}: {exc}") from None
    try:
        return SnsgaConfig(**values)
    except ValueError as exc:
        raise ConfigParseError(f"{source}: {exc}") from None


def load_config(path) -> SnsgaConfig:
    return parse_config(Path(path).read_text(), str(path))


def format_gap(value: Optional[float]) -> str:
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return "-"
    return f"{value:.2e}"
