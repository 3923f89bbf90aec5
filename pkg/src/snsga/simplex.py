"""Nelder-Mead simplex geometry and the worst-vertex replacement loop.

The loop has no shrink step: when a contraction fails to beat the worst
vertex, the contracted point replaces it anyway.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Sequence

import numpy as np

from .core import (
    EvalCounter,
    Individual,
    ObjectiveProblem,
    StructuralError,
    clip_to_problem,
)


@dataclass(frozen=True)
class SimplexCoefficients:
    alpha: float = 1.0
    gamma: float = 4.0
    beta: float = 0.2
    side: float = 2.0

    def __post_init__(self):
        if not self.alpha > 0:
            raise StructuralError(f"reflection coefficient must be > 0, got {self.alpha}")
        if not self.gamma > 1:
            raise StructuralError(f"expansion coefficient must be > 1, got {self.gamma}")
        if not 0 <= self.beta <= 1:
            raise StructuralError(f"contraction coefficient must lie in [0, 1], got {self.beta}")
        if not self.side > 0:
            raise StructuralError(f"simplex side must be > 0, got {self.side}")


def regular_offsets(n: int, side: float) -> tuple:
    """Return ``(p, q)`` for a regular simplex of edge ``side`` in ``n`` dimensions."""
    if n < 1:
        raise StructuralError("simplex dimension must be at least 1")
    if not side > 0:
        raise StructuralError("simplex side must be positive")
    scale = side / (n * math.sqrt(2.0))
    root = math.sqrt(n + 1.0)
    return scale * (root + n - 1), scale * (root - 1)


def regular_simplex(base, side: float) -> List[np.ndarray]:
    """Vertices of a regular simplex anchored at ``base``.

    Vertex ``j`` (1-based) is ``base + p*e_j + q*sum(e_s, s != j)``, so every
    edge has length ``side``.  No bound clipping is applied here.
    """
    base = np.asarray(base, dtype=float).reshape(-1)
    n = base.size
    p, q = regular_offsets(n, side)
    offsets = np.full((n, n), q)
    np.fill_diagonal(offsets, p)
    return [base.copy()] + [base + row for row in offsets]


def reflect(worst, centroid, alpha: float) -> np.ndarray:
    worst, centroid = _pair(worst, centroid)
    return (1.0 + alpha) * centroid - alpha * worst


def expand(reflected, centroid, gamma: float) -> np.ndarray:
    reflected, centroid = _pair(reflected, centroid)
    return gamma * reflected + (1.0 - gamma) * centroid


def contract(worst, centroid, beta: float) -> np.ndarray:
    worst, centroid = _pair(worst, centroid)
    return beta * worst + (1.0 - beta) * centroid


def _pair(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise StructuralError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return a, b


class Simplex:
    """n+1 evaluated vertices; fitness is the first objective."""

    def __init__(self, vertices: Sequence[Individual]):
        vertices = list(vertices)
        if len(vertices) < 2:
            raise StructuralError("a simplex needs at least two vertices")
        n = vertices[0].position.size
        if len(vertices) != n + 1 or any(v.position.size != n for v in vertices):
            raise StructuralError(f"expected {n + 1} vertices of dimension {n}")
        if any(not v.evaluated for v in vertices):
            raise StructuralError("simplex vertices must be evaluated")
        self.vertices = vertices

    @classmethod
    def from_points(cls, points, problem: ObjectiveProblem, counter: EvalCounter, origin="simplex"):
        """Clip ``points`` to the problem box and evaluate each one."""
        vertices = []
        for point in points:
            ind = Individual(clip_to_problem(point, problem), origin=origin)
            ind.evaluate(problem, counter)
            vertices.append(ind)
        return cls(vertices)

    @property
    def dimension(self) -> int:
        return len(self.vertices) - 1

    def fitnesses(self) -> np.ndarray:
        return np.array([v.fitness for v in self.vertices])

    def worst_index(self) -> int:
        # np.argmax returns the first maximal index: ties go to the lowest index
        return int(np.argmax(self.fitnesses()))

    def best_index(self) -> int:
        return int(np.argmin(self.fitnesses()))

    def best(self) -> Individual:
        return self.vertices[self.best_index()]

    def sort_vertices(self) -> None:
        """Order vertices best first; equal fitness keeps the original order."""
        self.vertices.sort(key=lambda v: v.fitness)


def centroid_excluding_worst(simplex: Simplex, worst: int | None = None) -> np.ndarray:
    if worst is None:
        worst = simplex.worst_index()
    others = [v.position for i, v in enumerate(simplex.vertices) if i != worst]
    return np.mean(others, axis=0)


def nm_step(simplex: Simplex, coeffs: SimplexCoefficients, problem: ObjectiveProblem,
            counter: EvalCounter) -> str:
    """One reflect/expand/contract step; returns the move that was kept."""
    fits = simplex.fitnesses()
    h = int(np.argmax(fits))
    f_best = fits.min()
    f_worst = fits[h]
    x_h = simplex.vertices[h].position
    centroid = centroid_excluding_worst(simplex, h)

    reflected = Individual(clip_to_problem(reflect(x_h, centroid, coeffs.alpha), problem),
                           origin="reflection")
    reflected.evaluate(problem, counter)

    if reflected.fitness < f_best:
        expanded = Individual(
            clip_to_problem(expand(reflected.position, centroid, coeffs.gamma), problem),
            origin="expansion",
        )
        expanded.evaluate(problem, counter)
        if expanded.fitness < reflected.fitness:
            simplex.vertices[h] = expanded
            return "expansion"
        simplex.vertices[h] = reflected
        return "reflection"
    if reflected.fitness < f_worst:
        simplex.vertices[h] = reflected
        return "reflection"
    contracted = Individual(clip_to_problem(contract(x_h, centroid, coeffs.beta), problem),
                            origin="contraction")
    contracted.evaluate(problem, counter)
    simplex.vertices[h] = contracted
    return "contraction"


def nm_iterate(simplex: Simplex, coeffs: SimplexCoefficients, problem: ObjectiveProblem,
               counter: EvalCounter, max_iters: int) -> Simplex:
    """Run ``max_iters`` Nelder-Mead steps in place and return the simplex.

    Each step costs one or two evaluations.  Collapsed simplexes are not
    restarted.
    """
    if max_iters < 1:
        raise StructuralError("max_iters must be at least 1")
    if simplex.dimension != problem.dimension:
        raise StructuralError("simplex and problem dimensions differ")
    for _ in range(max_iters):
        nm_step(simplex, coeffs, problem, counter)
    return simplex

