"""The hybrid simplex / non-dominated-sorting GA loop.

One generation:

1. rank the parents by non-dominated sorting;
2. breed ``population_size`` offspring by binary tournament, crossover and
   mutation, and evaluate them;
3. build one simplex from the best parent and the ``n`` fittest offspring
   and run ``simplex_max_iters`` Nelder-Mead steps on it; the remaining
   offspring pass through untouched;
4. keep the best ``population_size`` of parents + offspring by
   ``(rank, fitness)``.

The initial population comes from short simplex refinements around uniform
random base points.  A run stops after ``max_generations``, when the
evaluation budget is spent, or when the optional stop rule fires; the last
two are checked after every single objective evaluation.
"""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass, field, fields
from typing import Callable, List, Optional

import numpy as np

from .core import (
    EvalCounter,
    Individual,
    ObjectiveProblem,
    Population,
    StructuralError,
)
from .nsga import binary_tournament, crossover, fast_nondominated_sort, mutate
from .simplex import Simplex, SimplexCoefficients, nm_iterate, regular_simplex

log = logging.getLogger(__name__)

StopRule = Callable[[float, float], bool]

# substream tags for SeedSequence keys
_INIT_STREAM = 0
_GENERATION_STREAM = 1


@dataclass(frozen=True)
class SnsgaConfig:
    population_size: int = 30
    max_generations: int = 60
    crossover_ratio: float = 1.2
    mutation_scale: float = 0.1
    mutation_shrink: float = 0.5
    simplex_side: float = 2.0
    reflection: float = 1.0
    expansion: float = 4.0
    contraction: float = 0.2
    simplex_max_iters: int = 30
    init_simplex_iters: int = 10
    rng_seed: int = 0
    eval_budget: Optional[int] = None
    target_objective: Optional[float] = None

    def __post_init__(self):
        if self.population_size < 1:
            raise StructuralError("population_size must be positive")
        if self.max_generations < 1:
            raise StructuralError("max_generations must be positive")
        if self.simplex_max_iters < 1:
            raise StructuralError("simplex_max_iters must be positive")
        if self.init_simplex_iters < 0:
            raise StructuralError("init_simplex_iters must be non-negative")
        if not self.crossover_ratio > 0 or not self.mutation_scale > 0:
            raise StructuralError("crossover_ratio and mutation_scale must be positive")
        if not 0 <= self.mutation_shrink <= 1:
            raise StructuralError("mutation_shrink must lie in [0, 1]")
        if self.eval_budget is not None and self.eval_budget < 1:
            raise StructuralError("eval_budget must be positive when set")
        self.coefficients  # validates the simplex coefficients

    @property
    def coefficients(self) -> SimplexCoefficients:
        return SimplexCoefficients(self.reflection, self.expansion, self.contraction, self.simplex_side)

    def replace(self, **changes) -> "SnsgaConfig":
        data = asdict(self)
        data.update(changes)
        return SnsgaConfig(**data)

    @classmethod
    def field_names(cls) -> List[str]:
        return [f.name for f in fields(cls)]


@dataclass(frozen=True)
class TraceRecord:
    generation: int
    best_objective: float
    evaluations: int


@dataclass
class RunResult:
    best_point: np.ndarray
    best_objective: float
    evaluations_used: int
    generations_used: int
    trace: List[TraceRecord]
    initial_mean_objective: float
    termination: str = "generations"
    evaluations_at_target: Optional[int] = None
    final_population: Optional[Population] = field(default=None, repr=False)


class BudgetExhausted(Exception):
    """Raised when the evaluation budget runs out; carries the partial state."""

    def __init__(self, evaluations: int, population: Optional[Population] = None):
        super().__init__(f"evaluation budget exhausted after {evaluations} evaluations")
        self.evaluations = evaluations
        self.population = population


class _TargetReached(Exception):
    pass


class RunMonitor(EvalCounter):
    """Evaluation counter that also tracks the incumbent and enforces stops.

    The stop rule is armed only after the initial population exists, since
    it needs the initial mean objective.
    """

    def __init__(self, budget: Optional[int] = None, stop_rule: Optional[StopRule] = None,
                 stop_on_target: bool = True):
        super().__init__()
        self.budget = budget
        self.stop_rule = stop_rule
        self.stop_on_target = stop_on_target
        self.best_point: Optional[np.ndarray] = None
        self.best_objective = np.inf
        self.initial_mean: Optional[float] = None
        self.evaluations_at_target: Optional[int] = None

    def record(self, point, objectives):
        super().record(point, objectives)
        value = float(objectives[0])
        if value < self.best_objective:
            self.best_objective = value
            self.best_point = np.array(point, dtype=float)
        if self.evaluations_at_target is None and self.initial_mean is not None:
            self.check_target()
        if self.budget is not None and self.count >= self.budget:
            raise BudgetExhausted(self.count)

    def arm(self, initial_mean: float) -> None:
        self.initial_mean = initial_mean
        self.check_target()

    def check_target(self) -> None:
        if self.stop_rule is None or self.evaluations_at_target is not None:
            return
        if self.stop_rule(self.best_objective, self.initial_mean):
            self.evaluations_at_target = self.count
            if self.stop_on_target:
                raise _TargetReached()


def make_rng(seed: int, *key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(seed) & 0xFFFFFFFF, *key]))


def best_of(population: Population | List[Individual]) -> Individual:
    """Member with the smallest first objective; ties go to the lowest index."""
    members = population.members if isinstance(population, Population) else list(population)
    if not members:
        raise StructuralError("empty population")
    best = 0
    for i, m in enumerate(members):
        if m.fitness < members[best].fitness:
            best = i
    return members[best]


def initialize_population(problem: ObjectiveProblem, config: SnsgaConfig,
                          rng: np.random.Generator, counter: EvalCounter) -> Population:
    """Seed ``population_size`` individuals from refined regular simplexes.

    Each base point is drawn uniformly in the box, a regular simplex of side
    ``simplex_side`` is built around it, clipped and refined for
    ``min(simplex_max_iters, init_simplex_iters)`` steps, and its best vertex
    joins the population.
    """
    coeffs = config.coefficients
    iters = min(config.simplex_max_iters, config.init_simplex_iters)
    members: List[Individual] = []
    try:
        while len(members) < config.population_size:
            base = problem.lower + rng.random(problem.dimension) * problem.width
            simplex = Simplex.from_points(regular_simplex(base, coeffs.side), problem, counter)
            if iters:
                nm_iterate(simplex, coeffs, problem, counter, iters)
            best = simplex.best().copy()
            best.origin = "initial"
            members.append(best)
    except BudgetExhausted as exc:
        exc.population = Population(members, 0)
        raise
    return Population(members, 0)


def _survivors(candidates: List[Individual], size: int) -> List[Individual]:
    fast_nondominated_sort(candidates)
    order = sorted(range(len(candidates)),
                   key=lambda i: (candidates[i].rank, candidates[i].fitness, i))
    return [candidates[i] for i in order[:size]]


def next_generation(population: Population, problem: ObjectiveProblem, config: SnsgaConfig,
                    rng: np.random.Generator, counter: EvalCounter) -> Population:
    """Breed, refine and truncate one generation."""
    g = population.generation
    bounds = problem.bounds
    fast_nondominated_sort(population)
    offspring: List[Individual] = []
    for _ in range(config.population_size):
        a = binary_tournament(population, rng)
        b = binary_tournament(population, rng)
        child = crossover(a, b, config.crossover_ratio, rng, bounds)
        child = mutate(child, config.mutation_scale, config.mutation_shrink,
                       g, config.max_generations, rng, bounds)
        child.evaluate(problem, counter)
        offspring.append(child)

    # simplex: the incumbent parent plus the n fittest offspring
    pool = population.members + offspring
    n_parents = len(population.members)
    if len(offspring) >= problem.dimension:
        elite = min(range(n_parents), key=lambda i: (pool[i].fitness, i))
        fresh = sorted(range(n_parents, len(pool)), key=lambda i: (pool[i].fitness, i))
        top = [elite] + fresh[:problem.dimension]
        simplex = Simplex([pool[i] for i in top])
        nm_iterate(simplex, config.coefficients, problem, counter, config.simplex_max_iters)
        for slot, vertex in zip(top, simplex.vertices):
            pool[slot] = vertex

    survivors = _survivors(pool, config.population_size)
    return Population(survivors, g + 1)


def run(problem: ObjectiveProblem, config: SnsgaConfig = SnsgaConfig(),
        stop_rule: Optional[StopRule] = None, stop_on_target: bool = True) -> RunResult:
    """Minimize ``problem`` and return the incumbent with its trace.

    ``stop_rule(best_objective, initial_mean_objective)`` is consulted after
    every evaluation once the initial population exists.  When
    ``stop_rule`` is None and ``config.target_objective`` is set, the rule is
    ``best <= target_objective``.  With ``stop_on_target=False`` the run
    continues to its normal end but the evaluation count at which the rule
    first held is still recorded.
    """
    if stop_rule is None and config.target_objective is not None:
        target = config.target_objective
        stop_rule = lambda best, _init: best <= target  # noqa: E731
    monitor = RunMonitor(config.eval_budget, stop_rule, stop_on_target)
    trace: List[TraceRecord] = []
    population: Optional[Population] = None
    initial_mean = np.nan
    termination = "generations"

    def mark(generation):
        if not trace or trace[-1].evaluations != monitor.count or trace[-1].generation != generation:
            trace.append(TraceRecord(generation, float(monitor.best_objective), monitor.count))

    try:
        population = initialize_population(problem, config, make_rng(config.rng_seed, _INIT_STREAM), monitor)
        initial_mean = float(np.mean([m.fitness for m in population]))
        mark(0)
        monitor.arm(initial_mean)
        while population.generation < config.max_generations:
            rng = make_rng(config.rng_seed, _GENERATION_STREAM, population.generation)
            population = next_generation(population, problem, config, rng, monitor)
            mark(population.generation)
    except BudgetExhausted as exc:
        termination = "budget"
        if population is None and exc.population is not None and len(exc.population):
            initial_mean = float(np.mean([m.fitness for m in exc.population]))
    except _TargetReached:
        termination = "target"

    if monitor.best_point is None:
        raise StructuralError("run ended before any evaluation")
    generations = population.generation if population is not None else 0
    if termination != "generations":
        mark(generations)
    log.debug("%s: %s after %d evaluations, best %.6g", problem.name, termination,
              monitor.count, monitor.best_objective)
    return RunResult(
        best_point=monitor.best_point,
        best_objective=float(monitor.best_objective),
        evaluations_used=monitor.count,
        generations_used=generations,
        trace=trace,
        initial_mean_objective=initial_mean,
        termination=termination,
        evaluations_at_target=monitor.evaluations_at_target,
        final_population=population,
    )
