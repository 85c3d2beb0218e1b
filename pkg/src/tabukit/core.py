"""Problem-independent types: bounded parameter spaces, normalized
coordinates, objective wrappers and evaluation counting.

All search logic works in normalized [0, 1] coordinates; objective
functions receive vectors in their own (denormalized) units. The engine
always minimizes internally: maximization problems are negated at the
evaluation boundary.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

MINIMIZE = "minimize"
MAXIMIZE = "maximize"

#: Engine value stored for infeasible points. Infeasible points are never
#: selected as moves, never become a thread best and are never archived,
#: so their raw objective value is irrelevant to the search.
INFEASIBLE_VALUE = math.inf


@dataclass(frozen=True)
class ParameterSpace:
    """Box-bounded continuous search region with a per-variable resolution."""

    lower: np.ndarray
    upper: np.ndarray
    min_step: np.ndarray

    def __post_init__(self):
        lower = np.asarray(self.lower, dtype=float)
        upper = np.asarray(self.upper, dtype=float)
        min_step = np.asarray(self.min_step, dtype=float)
        if lower.shape != upper.shape or lower.shape != min_step.shape:
            raise ValueError("lower, upper and min_step must have equal length")
        if lower.ndim != 1 or lower.size == 0:
            raise ValueError("bounds must be non-empty 1-D vectors")
        if not np.all(lower < upper):
            raise ValueError("every lower bound must be strictly below its upper bound")
        if not np.all((min_step > 0) & (min_step <= upper - lower)):
            raise ValueError("min_step must satisfy 0 < min_step <= upper - lower")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)
        object.__setattr__(self, "min_step", min_step)

    @property
    def dimension(self) -> int:
        return self.lower.size

    @property
    def span(self) -> np.ndarray:
        return self.upper - self.lower

    @classmethod
    def cube(cls, lower: float, upper: float, dimension: int, min_step: float) -> "ParameterSpace":
        """Space with identical bounds and resolution in every variable."""
        ones = np.ones(dimension)
        return cls(lower * ones, upper * ones, min_step * ones)


@dataclass(frozen=True, eq=False)
class SearchPoint:
    """A normalized parameter vector with its engine objective value.

    ``value`` is in engine sense (lower is better); infeasible points
    carry ``INFEASIBLE_VALUE``.
    """

    x: np.ndarray
    value: float
    feasible: bool


@dataclass(frozen=True)
class Objective:
    """A black-box objective over a parameter space.

    ``fn`` maps a denormalized parameter vector to ``(value, feasible)``
    and must be deterministic. ``sense`` states whether the raw value is
    to be minimized or maximized; the engine sees minimization only.
    """

    space: ParameterSpace
    fn: Callable[[np.ndarray], tuple[float, bool]]
    sense: str = MINIMIZE
    name: str = ""

    def __post_init__(self):
        if self.sense not in (MINIMIZE, MAXIMIZE):
            raise ValueError(f"unknown sense {self.sense!r}")

    def native_value(self, engine_value: float) -> float:
        """Convert an engine (minimized) value back to the problem's sense."""
        return -engine_value if self.sense == MAXIMIZE else engine_value


class EvalCounter:
    """Thread-safe count of true objective evaluations.

    Tabu-rejected candidates are never evaluated and therefore never
    counted; that bookkeeping is what makes the eval columns of the
    result tables meaningful.
    """

    def __init__(self):
        self._count = 0
        self._lock = threading.Lock()

    def increment(self) -> None:
        with self._lock:
            self._count += 1

    @property
    def count(self) -> int:
        return self._count


def normalize(space: ParameterSpace, raw: np.ndarray) -> np.ndarray:
    """Map a raw in-bounds vector to [0, 1]^N coordinates."""
    raw = np.asarray(raw, dtype=float)
    if raw.shape != (space.dimension,):
        raise ValueError(f"expected {space.dimension} components, got {raw.shape}")
    if np.any(raw < space.lower) or np.any(raw > space.upper):
        raise ValueError("vector outside bounds; clamp before normalizing")
    return (raw - space.lower) / space.span


def denormalize(space: ParameterSpace, x: np.ndarray) -> np.ndarray:
    """Map normalized [0, 1]^N coordinates back to problem units."""
    x = np.asarray(x, dtype=float)
    if x.shape != (space.dimension,):
        raise ValueError(f"expected {space.dimension} components, got {x.shape}")
    return space.lower + x * space.span


def clamp(x: np.ndarray) -> np.ndarray:
    """Clip a normalized vector into [0, 1] componentwise."""
    return np.clip(x, 0.0, 1.0)


def evaluate(objective: Objective, counter: EvalCounter, x: np.ndarray) -> SearchPoint:
    """Evaluate one normalized point, counting exactly one evaluation.

    Raises ValueError if the objective reports a non-finite value for a
    feasible point; that is an objective bug, not a search condition.
    """
    raw = denormalize(objective.space, x)
    value, feasible = objective.fn(raw)
    counter.increment()
    if not feasible:
        return SearchPoint(x=np.array(x, dtype=float, copy=True), value=INFEASIBLE_VALUE, feasible=False)
    if not math.isfinite(value):
        raise ValueError(f"objective {objective.name!r} returned non-finite value {value!r} for a feasible point")
    engine = -float(value) if objective.sense == MAXIMIZE else float(value)
    return SearchPoint(x=np.array(x, dtype=float, copy=True), value=engine, feasible=True)
