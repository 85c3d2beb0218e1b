"""Numerical test objectives: Schwefel sine landscape and the constrained bump.

Both are exposed as factory functions returning ready-to-run Objective
instances over their conventional bounds.
"""
from __future__ import annotations

import math

import numpy as np

from .core import MAXIMIZE, MINIMIZE, Objective, ParameterSpace

#: Location of the Schwefel minimum along every axis.
SCHWEFEL_ARGMIN = 420.9687
#: Resolvable step in raw units for all built-in benchmark spaces.
BENCHMARK_MIN_STEP = 1e-4

BUMP_PRODUCT_FLOOR = 0.75


def schwefel(x: np.ndarray) -> float:
    """Schwefel function, minimization form.

    f(x) = -sum(x_i * sin(sqrt(|x_i|))), so the deep well at
    x_i = 420.9687 on every axis is the global minimum, about -418.983
    per dimension (-4189.83 in 10-D).
    """
    x = np.asarray(x, dtype=float)
    return float(-np.sum(x * np.sin(np.sqrt(np.abs(x)))))


def bump_value(x: np.ndarray) -> float:
    """Signed bump ratio: (sum cos^4 - 2 prod cos^2) / sum(i * x_i^2).

    The numerator may be negative and the denominator is the plain
    index-weighted sum of squares. See keane_bump for the variant with
    an absolute value and square-root denominator.
    """
    x = np.asarray(x, dtype=float)
    c = np.cos(x)
    num = float(np.sum(c**4) - 2.0 * np.prod(c**2))
    den = float(np.sum(np.arange(1, x.size + 1) * x**2))
    if den == 0.0:
        raise ZeroDivisionError("bump ratio undefined at the origin")
    return num / den


def keane_bump(x: np.ndarray) -> float:
    """Classic bump formulation: |sum cos^4 - 2 prod cos^2| / sqrt(sum i*x_i^2)."""
    x = np.asarray(x, dtype=float)
    c = np.cos(x)
    num = abs(float(np.sum(c**4) - 2.0 * np.prod(c**2)))
    den = math.sqrt(float(np.sum(np.arange(1, x.size + 1) * x**2)))
    if den == 0.0:
        raise ZeroDivisionError("bump ratio undefined at the origin")
    return num / den


def bump_feasible(x: np.ndarray) -> bool:
    """Both bump constraints: prod(x_i) > 0.75 and sum(x_i) < 7.5 n.

    The product test runs in log space so 50-component products neither
    overflow nor underflow; any nonpositive component fails immediately.
    """
    x = np.asarray(x, dtype=float)
    if float(np.sum(x)) >= 7.5 * x.size:
        return False
    if np.any(x <= 0.0):
        return False
    return float(np.sum(np.log(x))) > math.log(BUMP_PRODUCT_FLOOR)


BUMP_VARIANTS = {"keane": keane_bump, "signed": bump_value}


def make_schwefel10() -> Objective:
    """10-D Schwefel objective on [-500, 500]^10."""
    space = ParameterSpace.cube(-500.0, 500.0, 10, min_step=BENCHMARK_MIN_STEP)
    return Objective(
        space=space,
        fn=lambda raw: (schwefel(raw), True),
        sense=MINIMIZE,
        name="schwefel10",
    )


def make_bump(n: int, variant: str = "keane") -> Objective:
    """Constrained bump objective on [0, 10]^n, maximized.

    variant selects the formula: "keane" (|num| / sqrt(den), the usual
    published shape with a maximum near 0.8) or "signed" (num / den with
    the squared denominator, a much flatter surface).
    """
    if n < 2:
        raise ValueError("bump needs at least 2 dimensions")
    try:
        value_fn = BUMP_VARIANTS[variant]
    except KeyError:
        raise ValueError(f"unknown bump variant: {variant!r}") from None

    def fn(raw: np.ndarray) -> tuple[float, bool]:
        if not bump_feasible(raw):
            return 0.0, False
        return value_fn(raw), True

    space = ParameterSpace.cube(0.0, 10.0, n, min_step=BENCHMARK_MIN_STEP)
    return Objective(space=space, fn=fn, sense=MAXIMIZE, name=f"bump{n}")
