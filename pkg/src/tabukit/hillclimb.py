"""Pattern-search move generator with tabu screening.

One step explores the 2N axial neighbors of the base point, picks the
best allowable candidate (the least-bad one when nothing improves),
then tries to extend the accepted move along its own direction. Tabu
candidates are skipped before evaluation, so they cost nothing.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np

from .core import EvalCounter, Objective, SearchPoint, clamp, evaluate
from .memory import IntermediateMemory, TabuList

if TYPE_CHECKING:  # pragma: no cover
    from .control import ThreadState

IMPROVED = "improved"
NOT_IMPROVED = "not_improved"
STALLED = "stalled"

#: Strict-improvement slack; keeps rounding noise from resetting the
#: fail counter forever on a flat plateau.
IMPROVE_TOL = 1e-12


@dataclass
class Candidate:
    """One axial neighbor: base with ``axis`` moved by ``sign * step``."""

    x: np.ndarray
    axis: int
    sign: int


@dataclass
class MoveSet:
    """Allowable axial candidates around a base point, plus rejection tallies."""

    candidates: list[Candidate] = field(default_factory=list)
    tabu_rejected: int = 0
    infeasible_rejected: int = 0


def axial_moves(base_x: np.ndarray, step: float, tabu: TabuList) -> MoveSet:
    """Generate the clamped, tabu-screened axial neighbors of ``base_x``.

    Candidates are ordered by variable index with the increment before
    the decrement, which is also the tie-break order downstream.
    Candidates that clamp back onto the base (base already at a bound)
    are dropped as degenerate.
    """
    moves = MoveSet()
    for i in range(base_x.size):
        for sign in (1, -1):
            x = base_x.copy()
            x[i] += sign * step
            x = clamp(x)
            if x[i] == base_x[i]:
                continue
            if tabu.is_tabu(x):
                moves.tabu_rejected += 1
                continue
            moves.candidates.append(Candidate(x=x, axis=i, sign=sign))
    return moves


def explore(
    base: SearchPoint,
    step: float,
    objective: Objective,
    counter: EvalCounter,
    tabu: TabuList,
) -> tuple[SearchPoint | None, MoveSet]:
    """Evaluate the allowable neighbors and return the best one.

    The best move is returned even when it is worse than the base: when
    nothing improves, the smallest increase wins. Returns None only when
    every neighbor was degenerate, tabu or infeasible.
    """
    if step <= 0:
        raise ValueError("step must be positive")
    moves = axial_moves(base.x, step, tabu)
    best: SearchPoint | None = None
    for cand in moves.candidates:
        point = evaluate(objective, counter, cand.x)
        if not point.feasible:
            moves.infeasible_rejected += 1
            continue
        if best is None or point.value < best.value:
            best = point
    return best, moves


def pattern_move(old_base: np.ndarray, new_base: np.ndarray, k: float) -> np.ndarray:
    """Extend the move old_base -> new_base by a factor ``k``, clamped."""
    if k <= 0:
        raise ValueError("pattern factor must be positive")
    return clamp(new_base + k * (new_base - old_base))


def hj_step(
    state: "ThreadState",
    objective: Objective,
    counter: EvalCounter,
    shared: IntermediateMemory,
    k_pattern: float = 1.0,
) -> str:
    """One exploration + pattern-move cycle from the thread's base point.

    The adopted point (pattern point if strictly better than the
    exploration point, else the exploration point) becomes the new base,
    goes on the tabu list and is offered to the shared elite archive.
    Returns IMPROVED when the adopted point beats the thread's best from
    before the step, STALLED when no allowable move existed.
    """
    best_before = state.best.value
    move, _ = explore(state.base, state.step, objective, counter, state.tabu)
    if move is None:
        return STALLED

    adopted = move
    p_x = pattern_move(state.base.x, move.x, k_pattern)
    # Skip the pattern evaluation when clamping collapsed it onto the
    # exploration point, and never adopt a tabu pattern point.
    if not np.array_equal(p_x, move.x) and not state.tabu.is_tabu(p_x):
        pattern_point = evaluate(objective, counter, p_x)
        if pattern_point.feasible and pattern_point.value < move.value:
            adopted = pattern_point

    state.base = adopted
    state.tabu.push(adopted.x)
    shared.offer(adopted)
    state.observe(adopted, counter.count)
    return IMPROVED if adopted.value < best_before - IMPROVE_TOL else NOT_IMPROVED
