"""Acceptance criteria 1-12, one test each.

Every test prints a single ``criterion N: PASS|FAIL ...`` line; the lines are
also repeated in the pytest terminal summary.  Run directly with
``python3 tests/test_acceptance.py`` to get just those lines.
"""

import itertools
import sys
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from oracles import (  # noqa: E402
    affine_contract,
    affine_expand,
    affine_reflect,
    brute_force_fronts,
    random_instance,
    timetable_optimum,
)
from snsga import timetable as tt  # noqa: E402
from snsga.benchmarks import get_benchmark, registry, verify_registry  # noqa: E402
from snsga.core import EvalCounter, ObjectiveProblem  # noqa: E402
from snsga.driver import SnsgaConfig, best_of, initialize_population, make_rng, next_generation, run  # noqa: E402
from snsga.harness import is_success, normalize_trace, run_campaign, run_trial, success_threshold  # noqa: E402
from snsga.nsga import nondominated_fronts  # noqa: E402
from snsga.reference import PUBLISHED_SNSGA  # noqa: E402
from snsga.simplex import contract, expand, reflect, regular_simplex  # noqa: E402

RESULTS = []

RATE_FLOOR = {"RC": 90, "GP": 90, "B2": 90, "R2": 90, "Z2": 90,
              "SH": 80, "H34": 80, "S45": 80, "R5": 80, "R10": 70}
TRIALS = 100
FULL_RUNS = 5


def report(number, ok, detail):
    line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def test_criterion_01_simplex_geometry():
    worst = 0.0
    rng = np.random.default_rng(1)
    for n, side in itertools.product((1, 2, 3, 5, 10), (0.5, 2.0, 10.0)):
        v = regular_simplex(rng.uniform(-10, 10, n), side)
        d = [np.linalg.norm(a - b) for a, b in itertools.combinations(v, 2)]
        worst = max(worst, max(abs(x - side) / side for x in d))
    report(1, worst <= 1e-9, f"max relative edge error {worst:.2e} (limit 1e-9)")


def test_criterion_02_move_closed_forms():
    examples = [
        (reflect([2, 0], [0, 0], 1), [-2, 0]),
        (expand([1, 0], [0, 0], 4), [4, 0]),
        (contract([2, 0], [0, 0], 0.2), [0.4, 0]),
        (reflect([1, 1], [1, 1], 1), [1, 1]),
        (contract([1, 0], [0, 1], 0), [0, 1]),
    ]
    exact = all(np.array_equal(got, want) for got, want in examples)
    rng = np.random.default_rng(2)
    worst = 0.0
    for _ in range(10_000):
        n = int(rng.integers(1, 8))
        a, b = rng.uniform(-100, 100, (2, n))
        alpha, gamma, beta = rng.uniform(0.1, 3), rng.uniform(1.01, 6), rng.uniform(0, 1)
        for got, want in ((reflect(a, b, alpha), affine_reflect(a, b, alpha)),
                          (expand(a, b, gamma), affine_expand(a, b, gamma)),
                          (contract(a, b, beta), affine_contract(a, b, beta))):
            scale = max(1.0, float(np.max(np.abs(want))))
            worst = max(worst, float(np.max(np.abs(got - np.asarray(want)))) / scale)
    ok = exact and worst <= 4 * np.finfo(float).eps
    report(2, ok, f"worked examples exact={exact}; 10^4 random max scaled error {worst:.1e}")


def test_criterion_03_nondominated_sorting():
    rng = np.random.default_rng(3)
    mismatches = 0
    for k in range(500):
        n, m = int(rng.integers(1, 51)), int(rng.integers(1, 4))
        values = rng.integers(0, 8, (n, m)) if k % 2 else rng.random((n, m))
        if nondominated_fronts(values) != brute_force_fronts(values.tolist()):
            mismatches += 1
    report(3, mismatches == 0, f"{500 - mismatches}/500 random populations match the brute-force fronts")


def test_criterion_04_registry_integrity():
    devs = dict(verify_registry())
    ok = len(devs) == 10 and all(devs[s.name] <= s.tolerance for s in registry())
    report(4, ok, f"10 benchmarks verified; max deviation {max(devs.values()):.1e}")


@pytest.fixture(scope="module")
def campaign():
    t0 = time.time()
    reports, _ = run_campaign([s.name for s in registry()], TRIALS, SnsgaConfig(), base_seed=0)
    elapsed = time.time() - t0
    full = {}
    for spec in registry():
        counts = [run_trial(spec, SnsgaConfig(), 10_000 + s, full_run=True).evaluations_full
                  for s in range(FULL_RUNS)]
        full[spec.name] = min(counts)
    return {r.benchmark: r for r in reports}, full, elapsed


@pytest.mark.slow
def test_criterion_05_success_rates(campaign):
    reports, _, elapsed = campaign
    parts, ok = [], True
    for name, floor in RATE_FLOOR.items():
        rate = reports[name].success_rate
        ok &= rate >= floor
        parts.append(f"{name} {rate:.0f}%{'' if rate >= floor else '<' + str(floor)}")
    report(5, ok, f"{TRIALS} trials each ({elapsed:.0f} s): " + ", ".join(parts))


@pytest.mark.slow
def test_criterion_06_evaluation_counts(campaign):
    reports, full, _ = campaign
    parts, ok = [], True
    for name in RATE_FLOOR:
        mean = reports[name].mean_evaluations_successful
        cap = 20 * PUBLISHED_SNSGA[name][1]
        good = mean is not None and mean <= cap and mean < full[name]
        ok &= good
        shown = "-" if mean is None else f"{mean:.0f}"
        parts.append(f"{name} {shown}/{cap}/{full[name]}{'' if good else ' !'}")
    report(6, ok, "mean evals / 20x published / no-early-stop run: " + ", ".join(parts))


def test_criterion_07_success_predicate_boundary():
    cases = []
    for init in (0.0, 10.0, -3.86, 186.73, 1e5):
        thr = success_threshold(init)
        cases.append(is_success(thr, 0.0, init) is False)
        cases.append(is_success(thr - 1e-12, 0.0, init) is True)
    cases.append(is_success(0.3979, 0.397887, 10.0) is True)
    cases.append(is_success(1.0, 0.0, 0.0) is False)
    report(7, all(cases), f"{sum(cases)}/{len(cases)} boundary cases correct")


def test_criterion_08_normalization():
    ok = normalize_trace([2, 10, 6]) == [0.0, 1.0, 0.5] and normalize_trace([5, 5, 5]) == [0.0] * 3
    rng = np.random.default_rng(8)
    for _ in range(2000):
        trace = rng.normal(0, 10 ** rng.uniform(-6, 9), int(rng.integers(1, 100)))
        if rng.random() < 0.1:
            trace[:] = trace[0]
        out = np.asarray(normalize_trace(trace))
        ok &= bool(np.all((out >= 0) & (out <= 1)))
    report(8, bool(ok), "examples hold; 2000 fuzzed traces stay in [0, 1]")


def test_criterion_09_timetable_worked_example():
    inst = tt.lab_scenario()
    sched = tt.first_come_first_served(inst)
    f = [v for _, v in tt.objective_trace(inst, sched)]
    load = tt.occupancy(inst, sched)["rig1"]
    one = f[int(np.argmax(load == 1))]
    three = f[int(np.argmax(load == 3))]
    first_occupied = f[int(np.argmax(load > 0))]
    rig1 = [(a.start, r.duration) for a, r in zip(sched.assignments, inst.requests) if a and a.rig == "rig1"]
    fourth_start = sched.assignments[4].start
    first_end = min(s + d for s, d in rig1[:3])
    delay_ok = fourth_start - first_end >= inst.threshold_gap and fourth_start > inst.requests[4].arrival
    ok = first_occupied == 2 and one == 2 and three == 0 and delay_ok
    report(9, ok, f"f(t) starts {f[:4]}; user 4 starts slot {fourth_start} "
                  f"(first seat freed at {first_end}, gap {inst.threshold_gap})")


@pytest.mark.slow
def test_criterion_10_timetable_oracle():
    rng = np.random.default_rng(123)
    hits, t0 = 0, time.time()
    for i in range(50):
        inst = random_instance(rng)
        result = run(tt.encode(inst), SnsgaConfig(rng_seed=i, eval_budget=5000))
        hits += result.best_objective == timetable_optimum(inst)
    report(10, hits >= 45, f"{hits}/50 random instances reach the exact optimum ({time.time() - t0:.0f} s)")


def test_criterion_11_determinism():
    same = []
    for name in ("RC", "H34"):
        a = run_trial(get_benchmark(name), SnsgaConfig(), 42, keep_result=True)
        b = run_trial(get_benchmark(name), SnsgaConfig(), 42, keep_result=True)
        same.append(a.to_record() == b.to_record() and a.run_result.trace == b.run_result.trace
                    and a.run_result.best_point.tobytes() == b.run_result.best_point.tobytes())
    report(11, all(same), "RC and H34 records bit-identical across repeated seeded trials")


def test_criterion_12_elitism_and_counting():
    rng = np.random.default_rng(12)
    names = [s.name for s in registry()]
    failures = []
    for k in range(20):
        spec = get_benchmark(names[int(rng.integers(len(names)))])
        seed = int(rng.integers(2**31))
        calls = [0]

        def func(x, inner=spec.problem.func):
            calls[0] += 1
            return inner(x)

        problem = ObjectiveProblem(spec.name, spec.problem.lower, spec.problem.upper, func)
        config = SnsgaConfig(rng_seed=seed, max_generations=20)
        counter = EvalCounter()
        pop = initialize_population(problem, config, make_rng(seed, 0), counter)
        bests = [best_of(pop).fitness]
        for g in range(config.max_generations):
            pop = next_generation(pop, problem, config, make_rng(seed, 1, g), counter)
            bests.append(best_of(pop).fitness)
        if any(b > a for a, b in zip(bests, bests[1:])) or counter.count != calls[0]:
            failures.append(f"{spec.name}/{seed}")
        calls[0] = 0
        result = run(problem, config)
        trace = [r.best_objective for r in result.trace]
        if result.evaluations_used != calls[0] or any(b > a for a, b in zip(trace, trace[1:])):
            failures.append(f"{spec.name}/{seed} run")
    report(12, not failures, "20 runs: per-generation best non-increasing, counter equals independent tally"
           + (f"; failed {failures}" if failures else ""))


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
