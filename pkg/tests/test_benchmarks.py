import math

import numpy as np
import pytest

from snsga.benchmarks import (
    RegistryIntegrityError,
    get_benchmark,
    registry,
    resolve_suite,
    verify_registry,
    with_optimum_value,
)
from snsga.core import EvalCounter
from snsga.simplex import Simplex, SimplexCoefficients, nm_iterate, regular_simplex

NAMES = ["RC", "GP", "B2", "SH", "R2", "Z2", "H34", "S45", "R5", "R10"]
DIMS = {"RC": 2, "GP": 2, "B2": 2, "SH": 2, "R2": 2, "Z2": 2, "H34": 3, "S45": 4, "R5": 5, "R10": 10}

# literature optimum values, quoted to the precision they are usually published at
LITERATURE = {"RC": 0.397887, "GP": 3.0, "B2": 0.0, "SH": -186.7309, "R2": 0.0, "Z2": 0.0,
              "H34": -3.86278, "S45": -10.1532, "R5": 0.0, "R10": 0.0}


def value(name, x):
    return float(get_benchmark(name).problem.evaluate(np.asarray(x, float))[0])


def test_registry_names_and_dimensions():
    specs = registry()
    assert [s.name for s in specs] == NAMES
    for s in specs:
        assert s.problem.dimension == DIMS[s.name]
        assert s.problem.objective_count == 1
        assert s.source_note


def test_registry_matches_literature():
    for s in registry():
        assert s.known_optimum_value == pytest.approx(LITERATURE[s.name], abs=1e-4)


def test_branin_at_literature_minimizer():
    assert value("RC", [math.pi, 2.275]) == pytest.approx(0.39788735772973816, abs=1e-12)
    assert value("RC", [math.pi, 2.275]) == pytest.approx(0.397887, abs=1e-6)


@pytest.mark.parametrize("name, x, expected", [
    ("R2", [1, 1], 0.0),
    ("R2", [0, 0], 1.0),
    ("R5", [0] * 5, 4.0),
    ("Z2", [0, 0], 0.0),
    ("Z2", [1, 1], 9.3125),   # 2 + 1.5^2 + 1.5^4
    ("GP", [0, -1], 3.0),
    ("GP", [0, 0], 600.0),    # (1 + 19)(30 + 0)
    ("B2", [0, 0], 0.0),
    ("B2", [1, 1], 3.6),      # 1 + 2 + 0.3 - 0.4 + 0.7
])
def test_hand_values(name, x, expected):
    assert value(name, x) == pytest.approx(expected, abs=1e-12)


def test_verify_registry_passes():
    for name, dev in verify_registry():
        assert dev <= get_benchmark(name).tolerance
        assert dev <= 1e-6


def test_corrupted_registry_raises():
    bad = with_optimum_value(get_benchmark("GP"), 3.5)
    with pytest.raises(RegistryIntegrityError, match="GP"):
        verify_registry([get_benchmark("RC"), bad])


def test_shekel_refined_from_four():
    spec = get_benchmark("S45")
    counter = EvalCounter()
    s = Simplex.from_points(regular_simplex([4.0] * 4, 0.05), spec.problem, counter)
    nm_iterate(s, SimplexCoefficients(side=0.05), spec.problem, counter, 400)
    assert s.best().fitness == pytest.approx(spec.known_optimum_value, abs=1e-4)


@pytest.mark.parametrize("name", NAMES)
def test_finite_over_random_points(name):
    problem = get_benchmark(name).problem
    rng = np.random.default_rng(99)
    pts = problem.lower + rng.random((10_000, problem.dimension)) * problem.width
    vals = np.array([problem.func(p) for p in pts], dtype=float)
    assert np.isfinite(vals).all()
    assert vals.min() >= get_benchmark(name).known_optimum_value - 1e-9


def test_optimum_points_in_bounds():
    for s in registry():
        for p in s.known_optimum_points:
            assert s.problem.contains(p)


def test_lookup_aliases():
    assert get_benchmark("R_{10}").name == "R10"
    assert get_benchmark("s_{4,5}").name == "S45"
    assert [s.name for s in resolve_suite("RC, gp")] == ["RC", "GP"]
    assert len(resolve_suite("all")) == 10
    with pytest.raises(KeyError):
        get_benchmark("nope")


def test_export_document():
    d = get_benchmark("RC").to_dict()
    assert d["dimension"] == 2 and d["bounds"] == [[-5.0, 10.0], [0.0, 15.0]]
    assert len(d["optimum_points"]) == 3
