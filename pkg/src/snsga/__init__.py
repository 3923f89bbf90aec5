"""Hybrid Nelder-Mead simplex / non-dominated sorting genetic optimizer."""

from .core import (
    EvalCounter,
    Individual,
    NumericalFailure,
    ObjectiveProblem,
    Population,
    StructuralError,
    clip_to_bounds,
    evaluate_counted,
)
from .driver import RunResult, SnsgaConfig, best_of, run
from .benchmarks import BenchmarkSpec, get_benchmark, registry, verify_registry
from .harness import is_success, normalize_trace, run_campaign

__version__ = "0.1.0"
