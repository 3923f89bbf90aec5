"""Non-dominated sorting and real-coded genetic operators."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence

import numpy as np

from .core import Individual, Population, StructuralError, as_population


@dataclass(frozen=True)
class GeneticParams:
    crossover_ratio: float = 1.2
    mutation_scale: float = 0.1
    mutation_shrink: float = 0.5

    def __post_init__(self):
        if not self.crossover_ratio > 0:
            raise StructuralError("crossover_ratio must be positive")
        if not self.mutation_scale > 0:
            raise StructuralError("mutation_scale must be positive")
        if not 0 < self.mutation_shrink <= 1:
            raise StructuralError("mutation_shrink must lie in (0, 1]")


def dominates(a, b) -> bool:
    """True when ``a`` is no worse than ``b`` everywhere and better somewhere."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return bool(np.all(a <= b) and np.any(a < b))


def nondominated_fronts(objectives) -> List[List[int]]:
    """Partition rows of an ``(N, M)`` objective matrix into fronts.

    Front lists hold row indices in ascending order.
    """
    objectives = np.asarray(objectives, dtype=float)
    if objectives.ndim != 2:
        raise StructuralError("objective matrix must be 2-D")
    n = objectives.shape[0]
    if n == 0:
        return []
    le = np.all(objectives[:, None, :] <= objectives[None, :, :], axis=2)
    lt = np.any(objectives[:, None, :] < objectives[None, :, :], axis=2)
    dom = le & lt  # dom[i, j]: i dominates j
    counts = dom.sum(axis=0)
    fronts = []
    current = np.flatnonzero(counts == 0)
    while current.size:
        fronts.append(current.tolist())
        counts = counts - dom[current].sum(axis=0)
        counts[current] = -1
        current = np.flatnonzero(counts == 0)
    return fronts


def fast_nondominated_sort(population: Population | Sequence[Individual]) -> List[List[int]]:
    """Sort members into non-dominated fronts and set each member's ``rank``."""
    population = as_population(population)
    fronts = nondominated_fronts(population.objective_matrix())
    for rank, front in enumerate(fronts):
        for i in front:
            population.members[i].rank = rank
    return fronts


def _tournament_key(member: Individual, index: int):
    return (member.rank, member.fitness, index)


def binary_tournament(population: Population | Sequence[Individual], rng: np.random.Generator) -> Individual:
    """Pick two members uniformly (with replacement) and return the fitter one.

    Lower rank wins, then lower first objective, then lower index.
    """
    members = as_population(population).members
    if not members:
        raise StructuralError("cannot select from an empty population")
    if any(m.rank is None for m in members):
        raise StructuralError("tournament requires ranked members")
    i, j = (int(k) for k in rng.integers(len(members), size=2))
    if _tournament_key(members[j], j) < _tournament_key(members[i], i):
        i = j
    return members[i]


def crossover(parent_a: Individual, parent_b: Individual, ratio: float,
              rng: np.random.Generator, bounds=None) -> Individual:
    """Blend child ``a + r * ratio * (b - a)`` with ``r ~ U[0, 1]`` per coordinate.

    ``ratio > 1`` lets the child overshoot ``parent_b``; the result is clamped
    to ``bounds`` (an ``(n, 2)`` array) when given.
    """
    a = parent_a.position
    b = parent_b.position
    if a.shape != b.shape:
        raise StructuralError(f"parent dimensions differ: {a.shape} vs {b.shape}")
    r = rng.random(a.size)
    child = a + r * ratio * (b - a)
    if bounds is not None:
        bounds = np.asarray(bounds, dtype=float)
        child = np.clip(child, bounds[:, 0], bounds[:, 1])
    return Individual(child, origin="crossover")


def mutation_sigma(scale: float, shrink: float, generation: int, max_generations: int, width):
    """Per-coordinate standard deviation of the shrinking Gaussian mutation."""
    if max_generations < 1 or not 0 <= generation <= max_generations:
        raise StructuralError(f"generation {generation} outside [0, {max_generations}]")
    return scale * (1.0 - shrink * generation / max_generations) * np.asarray(width, dtype=float)


def mutate(individual: Individual, scale: float, shrink: float, generation: int,
           max_generations: int, rng: np.random.Generator, bounds) -> Individual:
    bounds = np.asarray(bounds, dtype=float)
    position = individual.position
    if bounds.shape != (position.size, 2):
        raise StructuralError("bounds do not match individual dimension")
    sigma = mutation_sigma(scale, shrink, generation, max_generations, bounds[:, 1] - bounds[:, 0])
    moved = position + sigma * rng.standard_normal(position.size)
    return Individual(np.clip(moved, bounds[:, 0], bounds[:, 1]), origin="mutation")
