"""Problem abstraction, bound handling and evaluation accounting."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np


class StructuralError(ValueError):
    """Malformed input: wrong lengths, empty populations, unevaluated members."""


class NumericalFailure(ArithmeticError):
    """An objective returned a non-finite value."""

    def __init__(self, point, values):
        self.point = np.array(point, dtype=float)
        self.values = np.array(values, dtype=float)
        super().__init__(f"non-finite objective {self.values.tolist()} at {self.point.tolist()}")


@dataclass(frozen=True)
class ObjectiveProblem:
    """A box-bounded minimization problem.

    ``func`` maps a 1-D array of length ``dimension`` to a scalar or to an
    array of ``objective_count`` values.  Maximization problems must be
    negated by the caller.
    """

    name: str
    lower: np.ndarray
    upper: np.ndarray
    func: Callable[[np.ndarray], object] = field(repr=False, compare=False)
    objective_count: int = 1

    def __post_init__(self):
        lower = np.asarray(self.lower, dtype=float).reshape(-1)
        upper = np.asarray(self.upper, dtype=float).reshape(-1)
        if lower.shape != upper.shape or lower.size == 0:
            raise StructuralError("lower and upper bounds must be non-empty and of equal length")
        if np.any(lower > upper):
            raise StructuralError(f"{self.name}: lower bound exceeds upper bound")
        if self.objective_count < 1:
            raise StructuralError("objective_count must be positive")
        lower.setflags(write=False)
        upper.setflags(write=False)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @property
    def dimension(self) -> int:
        return self.lower.size

    @property
    def bounds(self) -> np.ndarray:
        return np.column_stack([self.lower, self.upper])

    @property
    def width(self) -> np.ndarray:
        return self.upper - self.lower

    def evaluate(self, point) -> np.ndarray:
        """Objective vector at ``point``; never touches any counter."""
        values = np.atleast_1d(np.asarray(self.func(np.asarray(point, dtype=float)), dtype=float))
        if values.shape != (self.objective_count,):
            raise StructuralError(
                f"{self.name}: expected {self.objective_count} objective(s), got shape {values.shape}"
            )
        return values

    def contains(self, point) -> bool:
        point = np.asarray(point, dtype=float)
        return bool(np.all(point >= self.lower) and np.all(point <= self.upper))


class EvalCounter:
    """Counts objective evaluations for one run.

    Subclasses may override :meth:`record` to observe each evaluation (the
    driver uses this for budgets and early stopping); ``count`` is always
    incremented first.
    """

    def __init__(self, count: int = 0):
        if count < 0:
            raise StructuralError("count must be non-negative")
        self.count = count

    def record(self, point: np.ndarray, objectives: np.ndarray) -> None:
        self.count += 1

    def __repr__(self):
        return f"{type(self).__name__}(count={self.count})"


def clip_to_bounds(point, bounds) -> np.ndarray:
    """Clamp each coordinate of ``point`` into its interval.

    ``bounds`` is an ``(n, 2)`` array-like of ``[low, high]`` rows.
    """
    point = np.asarray(point, dtype=float)
    bounds = np.asarray(bounds, dtype=float)
    if point.ndim != 1 or bounds.ndim != 2 or bounds.shape != (point.size, 2):
        raise StructuralError(
            f"point of length {point.size} does not match bounds of shape {bounds.shape}"
        )
    return np.minimum(np.maximum(point, bounds[:, 0]), bounds[:, 1])


def clip_to_problem(point, problem: ObjectiveProblem) -> np.ndarray:
    point = np.asarray(point, dtype=float)
    if point.shape != problem.lower.shape:
        raise StructuralError(
            f"point of length {point.size} does not match dimension {problem.dimension}"
        )
    return np.minimum(np.maximum(point, problem.lower), problem.upper)


def evaluate_counted(problem: ObjectiveProblem, point, counter: EvalCounter) -> np.ndarray:
    """Evaluate ``problem`` at ``point`` and charge exactly one evaluation.

    Raises
    ------
    NumericalFailure
        If any objective value is NaN or infinite.  The evaluation is still
        counted, since the objective was called.
    """
    point = np.asarray(point, dtype=float)
    values = problem.evaluate(point)
    counter.record(point, values)
    if not np.all(np.isfinite(values)):
        raise NumericalFailure(point, values)
    return values


@dataclass
class Individual:
    position: np.ndarray
    objectives: Optional[np.ndarray] = None
    rank: Optional[int] = None
    origin: str = "random"

    @property
    def evaluated(self) -> bool:
        return self.objectives is not None

    @property
    def fitness(self) -> float:
        if self.objectives is None:
            raise StructuralError("individual has not been evaluated")
        return float(self.objectives[0])

    def evaluate(self, problem: ObjectiveProblem, counter: EvalCounter) -> "Individual":
        self.objectives = evaluate_counted(problem, self.position, counter)
        return self

    def copy(self) -> "Individual":
        return Individual(
            self.position.copy(),
            None if self.objectives is None else self.objectives.copy(),
            self.rank,
            self.origin,
        )


@dataclass
class Population:
    members: list = field(default_factory=list)
    generation: int = 0

    def __post_init__(self):
        if self.members:
            dims = {m.position.size for m in self.members}
            if len(dims) != 1:
                raise StructuralError(f"mixed member dimensions {sorted(dims)}")

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __getitem__(self, index):
        return self.members[index]

    def objective_matrix(self) -> np.ndarray:
        if not self.members:
            return np.empty((0, 0))
        if any(not m.evaluated for m in self.members):
            raise StructuralError("population contains unevaluated members")
        return np.vstack([m.objectives for m in self.members])


def as_population(members: Sequence[Individual] | Population) -> Population:
    if isinstance(members, Population):
        return members
    return Population(list(members))
