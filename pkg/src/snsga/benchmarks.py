"""The ten classic multimodal test problems and their known optima.

Formulas, domains and optima follow the usual global-optimization literature
(Chelouah & Siarry's continuous test set, also used by the NM-GA / NM-PSO
line of hybrids).  Optimum values are stored to full double precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Dict, List, Tuple

import numpy as np

from .core import ObjectiveProblem

OPTIMUM_TOLERANCE = 1e-6


class RegistryIntegrityError(ValueError):
    pass


@dataclass(frozen=True)
class BenchmarkSpec:
    problem: ObjectiveProblem
    known_optimum_value: float
    known_optimum_points: Tuple[Tuple[float, ...], ...]
    source_note: str = ""
    label: str = ""
    tolerance: float = OPTIMUM_TOLERANCE

    @property
    def name(self) -> str:
        return self.problem.name

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "label": self.label or self.name,
            "dimension": self.problem.dimension,
            "bounds": self.problem.bounds.tolist(),
            "optimum_value": self.known_optimum_value,
            "optimum_points": [list(p) for p in self.known_optimum_points],
            "source": self.source_note,
        }


# -- formulas -----------------------------------------------------------------

_BR_B = 5.1 / (4.0 * math.pi ** 2)
_BR_C = 5.0 / math.pi
_BR_T = 1.0 / (8.0 * math.pi)


def branin(x):
    x1, x2 = x
    return (x2 - _BR_B * x1 ** 2 + _BR_C * x1 - 6.0) ** 2 + 10.0 * (1.0 - _BR_T) * math.cos(x1) + 10.0


def goldstein_price(x):
    x1, x2 = x
    a = 1.0 + (x1 + x2 + 1.0) ** 2 * (
        19.0 - 14.0 * x1 + 3.0 * x1 ** 2 - 14.0 * x2 + 6.0 * x1 * x2 + 3.0 * x2 ** 2
    )
    b = 30.0 + (2.0 * x1 - 3.0 * x2) ** 2 * (
        18.0 - 32.0 * x1 + 12.0 * x1 ** 2 + 48.0 * x2 - 36.0 * x1 * x2 + 27.0 * x2 ** 2
    )
    return a * b


def b2(x):
    x1, x2 = x
    return (x1 ** 2 + 2.0 * x2 ** 2 - 0.3 * math.cos(3.0 * math.pi * x1)
            - 0.4 * math.cos(4.0 * math.pi * x2) + 0.7)


_SH_I = np.arange(1.0, 6.0)


def shubert(x):
    x1, x2 = x
    s1 = float(np.sum(_SH_I * np.cos((_SH_I + 1.0) * x1 + _SH_I)))
    s2 = float(np.sum(_SH_I * np.cos((_SH_I + 1.0) * x2 + _SH_I)))
    return s1 * s2


def rosenbrock(x):
    x = np.asarray(x, dtype=float)
    return float(np.sum(100.0 * (x[1:] - x[:-1] ** 2) ** 2 + (x[:-1] - 1.0) ** 2))


def zakharov(x):
    x = np.asarray(x, dtype=float)
    s = float(np.dot(0.5 * np.arange(1, x.size + 1), x))
    return float(np.dot(x, x)) + s ** 2 + s ** 4


_H3_ALPHA = np.array([1.0, 1.2, 3.0, 3.2])
_H3_A = np.array([[3.0, 10.0, 30.0], [0.1, 10.0, 35.0], [3.0, 10.0, 30.0], [0.1, 10.0, 35.0]])
_H3_P = 1e-4 * np.array([[3689, 1170, 2673], [4699, 4387, 7470],
                         [1091, 8732, 5547], [381, 5743, 8828]], dtype=float)


def hartmann3(x):
    x = np.asarray(x, dtype=float)
    inner = np.sum(_H3_A * (x - _H3_P) ** 2, axis=1)
    return -float(np.dot(_H3_ALPHA, np.exp(-inner)))


_SK_A = np.array([[4.0, 4.0, 4.0, 4.0], [1.0, 1.0, 1.0, 1.0], [8.0, 8.0, 8.0, 8.0],
                  [6.0, 6.0, 6.0, 6.0], [3.0, 7.0, 3.0, 7.0]])
_SK_C = np.array([0.1, 0.2, 0.2, 0.4, 0.4])


def shekel5(x):
    x = np.asarray(x, dtype=float)
    return -float(np.sum(1.0 / (np.sum((x - _SK_A) ** 2, axis=1) + _SK_C)))


# -- registry -----------------------------------------------------------------

def _box(low, high, n):
    return np.full(n, float(low)), np.full(n, float(high))


def _spec(name, label, func, low, high, value, points, note, tolerance=OPTIMUM_TOLERANCE):
    problem = ObjectiveProblem(name, np.asarray(low, float), np.asarray(high, float), func)
    return BenchmarkSpec(problem, value, tuple(tuple(map(float, p)) for p in points), note, label,
                         tolerance)


def _build() -> List[BenchmarkSpec]:
    specs = [
        _spec("RC", "RC", branin, [-5.0, 0.0], [10.0, 15.0], 5.0 / (4.0 * math.pi),
              [(-math.pi, 12.275), (math.pi, 2.275), (3.0 * math.pi, 2.475)],
              "Branin RCOS; domain [-5,10]x[0,15]; three global minimizers"),
        _spec("GP", "GP", goldstein_price, [-2.0, -2.0], [2.0, 2.0], 3.0, [(0.0, -1.0)],
              "Goldstein-Price; domain [-2,2]^2"),
        _spec("B2", "B2", b2, [-100.0, -100.0], [100.0, 100.0], 0.0, [(0.0, 0.0)],
              "Bohachevsky B2 (x1^2+2x2^2-0.3cos(3pi x1)-0.4cos(4pi x2)+0.7); domain [-100,100]^2"),
        _spec("SH", "SH", shubert, [-10.0, -10.0], [10.0, 10.0], -186.73090883102392,
              [(-7.083506409397382, 4.858056877022195), (-1.4251284289564423, -0.8003211005067602)],
              "Shubert; domain [-10,10]^2; 18 global minimizers among 760 local ones"),
        _spec("R2", "R_2", rosenbrock, *_box(-5, 10, 2), 0.0, [(1.0, 1.0)],
              "Rosenbrock, n=2; domain [-5,10]^n"),
        _spec("Z2", "Z_2", zakharov, *_box(-5, 10, 2), 0.0, [(0.0, 0.0)],
              "Zakharov, n=2; domain [-5,10]^n"),
        _spec("H34", "H_{3,4}", hartmann3, *_box(0, 1, 3), -3.862779787332663,
              [(0.11458888111058596, 0.5556488965584945, 0.8525469846916554)],
              "Hartmann, 3 variables / 4 terms; domain [0,1]^3"),
        _spec("S45", "S_{4,5}", shekel5, *_box(0, 10, 4), -10.153199679058229,
              [(4.000037152376549, 4.000133278657566, 4.000037151057555, 4.000133277090425)],
              "Shekel, 4 variables / 5 terms; domain [0,10]^4", tolerance=1e-4),
        _spec("R5", "R_5", rosenbrock, *_box(-5, 10, 5), 0.0, [(1.0,) * 5],
              "Rosenbrock, n=5; domain [-5,10]^n"),
        _spec("R10", "R_{10}", rosenbrock, *_box(-5, 10, 10), 0.0, [(1.0,) * 10],
              "Rosenbrock, n=10; domain [-5,10]^n"),
    ]
    return specs


_REGISTRY: Tuple[BenchmarkSpec, ...] = tuple(_build())


def registry() -> List[BenchmarkSpec]:
    return list(_REGISTRY)


def _normalize(name: str) -> str:
    return "".join(ch for ch in name.upper() if ch.isalnum())


_BY_NAME: Dict[str, BenchmarkSpec] = {}
for _s in _REGISTRY:
    _BY_NAME[_normalize(_s.name)] = _s
    _BY_NAME[_normalize(_s.label)] = _s


def get_benchmark(name: str) -> BenchmarkSpec:
    """Look up a benchmark by name or label (``R_10``, ``r10``, ``S_{4,5}``...)."""
    try:
        return _BY_NAME[_normalize(name)]
    except KeyError:
        known = ", ".join(s.name for s in _REGISTRY)
        raise KeyError(f"unknown benchmark {name!r}; known: {known}") from None


def resolve_suite(names) -> List[BenchmarkSpec]:
    if isinstance(names, str):
        names = [n for n in names.replace(";", ",").split(",") if n.strip()]
    if len(names) == 1 and names[0].strip().lower() == "all":
        return registry()
    return [get_benchmark(n.strip()) for n in names]


def verify_registry(specs=None) -> List[Tuple[str, float]]:
    """Evaluate each benchmark at its listed optima.

    Returns ``(name, max deviation)`` pairs; raises
    :class:`RegistryIntegrityError` naming the first benchmark whose
    deviation exceeds its tolerance.
    """
    if specs is None:
        specs = _REGISTRY
    out = []
    for spec in specs:
        if not spec.known_optimum_points:
            raise RegistryIntegrityError(f"{spec.name}: no optimum points listed")
        worst = 0.0
        for point in spec.known_optimum_points:
            if len(point) != spec.problem.dimension:
                raise RegistryIntegrityError(f"{spec.name}: optimum point has wrong dimension")
            if not spec.problem.contains(point):
                raise RegistryIntegrityError(f"{spec.name}: optimum point {point} outside bounds")
            value = float(spec.problem.evaluate(np.array(point))[0])
            worst = max(worst, abs(value - spec.known_optimum_value))
        if not worst <= spec.tolerance:
            raise RegistryIntegrityError(
                f"{spec.name}: value at optimum deviates by {worst:.3g} (> {spec.tolerance:g})"
            )
        out.append((spec.name, worst))
    return out


def with_optimum_value(spec: BenchmarkSpec, value: float) -> BenchmarkSpec:
    return replace(spec, known_optimum_value=value)
