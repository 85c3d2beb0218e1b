"""Search controller: failure-count schedule over the hill climber.

A counter of consecutive non-improving steps drives the escalation
ladder: recentre on the elite centroid, then jump to a recombined
random point, then halve the step and restart from the best point
found so far. The run ends when the step falls below the resolution
floor or the evaluation budget is spent.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import (
    EvalCounter,
    Objective,
    ParameterSpace,
    SearchPoint,
    clamp,
    denormalize,
    evaluate,
)
from .hillclimb import IMPROVED, hj_step
from .memory import (
    DEFAULT_ELITE_CAPACITY,
    DEFAULT_MATCH_TOL,
    DEFAULT_TABU_CAPACITY,
    IntermediateMemory,
    TabuList,
)

CONTINUE = "continue"
INTENSIFY = "intensify"
DIVERSIFY = "diversify"
REDUCE_STEP = "reduce_step"

STEP_FLOOR = "step_floor"
EVAL_BUDGET = "eval_budget"


@dataclass
class SearchConfig:
    """Tuning knobs for one search run. Defaults work on all built-in problems."""

    n_tabu: int = DEFAULT_TABU_CAPACITY
    m_elite: int = DEFAULT_ELITE_CAPACITY
    k_pattern: float = 1.0
    step_initial: float = 0.1
    step_reduce_factor: float = 0.5
    step_min: float | None = None
    intensify_after: int = 5
    diversify_after: int = 10
    reduce_after: int = 15
    match_tol: float = DEFAULT_MATCH_TOL
    max_evals: int = 100_000
    seed: int = 0

    def validate(self) -> None:
        if not (0 < self.intensify_after < self.diversify_after < self.reduce_after):
            raise ValueError("thresholds must satisfy 0 < intensify < diversify < reduce")
        if not (0.0 < self.step_reduce_factor < 1.0):
            raise ValueError("step_reduce_factor must lie in (0, 1)")
        if not (0.0 < self.step_initial <= 1.0):
            raise ValueError("step_initial must lie in (0, 1]")
        if self.step_min is not None and not (0.0 < self.step_min <= self.step_initial):
            raise ValueError("step_min must lie in (0, step_initial]")
        if self.n_tabu < 1 or self.m_elite < 1:
            raise ValueError("memory capacities must be at least 1")
        if self.k_pattern <= 0:
            raise ValueError("k_pattern must be positive")
        if self.max_evals < 1:
            raise ValueError("max_evals must be at least 1")


@dataclass
class ThreadState:
    """Mutable per-thread search state."""

    base: SearchPoint
    best: SearchPoint
    step: float
    tabu: TabuList
    fail_count: int = 0
    thread_id: int = 0
    #: (evaluation count, best value) at each improvement, oldest first.
    history: list[tuple[int, float]] = field(default_factory=list)

    def observe(self, point: SearchPoint, eval_count: int) -> bool:
        """Track the incumbent best. Returns True when ``point`` takes over."""
        if point.feasible and point.value < self.best.value:
            self.best = point
            self.history.append((eval_count, point.value))
            return True
        return False


def fresh_state(base: SearchPoint, config: SearchConfig, thread_id: int = 0) -> ThreadState:
    """Build a ThreadState around an already-evaluated starting point."""
    sentinel = SearchPoint(x=base.x, value=math.inf, feasible=False)
    return ThreadState(
        base=base,
        best=sentinel,
        step=config.step_initial,
        tabu=TabuList(config.n_tabu, config.match_tol),
        thread_id=thread_id,
    )


def resolved_step_min(config: SearchConfig, space: ParameterSpace) -> float:
    """Step floor in normalized units; derived from the space when unset."""
    if config.step_min is not None:
        return config.step_min
    return float(np.max(space.min_step / space.span))


def control_decision(fail_count: int, config: SearchConfig) -> str:
    """Map the consecutive-failure count onto the escalation ladder.

    Exact-threshold matches, not ranges: each escalation fires once as
    the counter passes through its threshold, and the counter keeps
    growing until an improvement or a step reduction resets it.
    """
    if fail_count == config.intensify_after:
        return INTENSIFY
    if fail_count == config.diversify_after:
        return DIVERSIFY
    if fail_count == config.reduce_after:
        return REDUCE_STEP
    return CONTINUE


def apply_action(
    state: ThreadState,
    action: str,
    memory: IntermediateMemory,
    objective: Objective,
    counter: EvalCounter,
    rng: np.random.Generator,
    config: SearchConfig,
) -> None:
    """Carry out a control action, mutating ``state`` in place.

    Intensify and diversify relocate the base (costing one evaluation);
    reduce_step halves the step, restarts from the incumbent best and
    resets the failure counter. With an empty elite archive intensify
    is a no-op and diversify falls back to a uniform random point.
    """
    if action == CONTINUE:
        return
    if action == REDUCE_STEP:
        state.step *= config.step_reduce_factor
        state.base = state.best
        state.fail_count = 0
        return
    if action == INTENSIFY:
        if len(memory) == 0:
            return
        x = memory.intensify()
    elif action == DIVERSIFY:
        if len(memory) == 0:
            x = rng.random(state.base.x.size)
        else:
            x = memory.diversify(rng)
    else:
        raise ValueError(f"unknown control action: {action!r}")

    point = evaluate(objective, counter, x)
    state.base = point
    state.tabu.push(point.x)
    memory.offer(point)
    state.observe(point, counter.count)


@dataclass
class RunResult:
    """Outcome of one search run."""

    best: SearchPoint
    best_raw: np.ndarray
    evals: int
    terminated_by: str
    history: list[tuple[int, float]]

    def best_native(self, objective: Objective) -> float:
        return objective.native_value(self.best.value)


def run_single(
    objective: Objective,
    config: SearchConfig | None = None,
    start: np.ndarray | None = None,
) -> RunResult:
    """Run the single-thread search to termination.

    ``start`` is a point in normalized [0,1] coordinates; when omitted
    the run starts from a seeded uniform random point.
    """
    config = config or SearchConfig()
    config.validate()
    space = objective.space
    step_floor = resolved_step_min(config, space)
    if step_floor > config.step_initial:
        raise ValueError("step_initial is below the resolution floor of the space")

    rng = np.random.default_rng(config.seed)
    counter = EvalCounter()
    memory = IntermediateMemory(config.m_elite, config.match_tol)

    if start is None:
        x0 = rng.random(space.dimension)
    else:
        x0 = clamp(np.asarray(start, dtype=float))
        if x0.shape != (space.dimension,):
            raise ValueError("start must have one coordinate per parameter")
    base = evaluate(objective, counter, x0)
    state = fresh_state(base, config)
    state.tabu.push(base.x)
    memory.offer(base)
    state.observe(base, counter.count)

    terminated_by = EVAL_BUDGET
    while True:
        if counter.count >= config.max_evals:
            break
        outcome = hj_step(state, objective, counter, memory, config.k_pattern)
        if outcome == IMPROVED:
            state.fail_count = 0
        else:
            state.fail_count += 1
        if counter.count >= config.max_evals:
            break
        action = control_decision(state.fail_count, config)
        apply_action(state, action, memory, objective, counter, rng, config)
        if state.step < step_floor:
            terminated_by = STEP_FLOOR
            break

    return RunResult(
        best=state.best,
        best_raw=denormalize(space, state.best.x),
        evals=counter.count,
        terminated_by=terminated_by,
        history=state.history,
    )
