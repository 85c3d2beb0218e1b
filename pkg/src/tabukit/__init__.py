"""Tabu search over a pattern-search hill climber, single- and two-thread."""

from .benchmarks import (
    bump_feasible,
    bump_value,
    keane_bump,
    make_bump,
    make_schwefel10,
    schwefel,
)
from .control import (
    CONTINUE,
    DIVERSIFY,
    EVAL_BUDGET,
    INTENSIFY,
    REDUCE_STEP,
    STEP_FLOOR,
    RunResult,
    SearchConfig,
    ThreadState,
    apply_action,
    control_decision,
    run_single,
)
from .core import (
    INFEASIBLE_VALUE,
    MAXIMIZE,
    MINIMIZE,
    EvalCounter,
    Objective,
    ParameterSpace,
    SearchPoint,
    clamp,
    denormalize,
    evaluate,
    normalize,
)
from .hillclimb import IMPROVED, NOT_IMPROVED, STALLED, explore, hj_step, pattern_move
from .hydraulic import (
    CircuitParams,
    CircuitState,
    CircuitTargets,
    circuit_objective,
    make_circuit,
    simulate_steady,
)
from .memory import IntermediateMemory, TabuList
from .multithread import (
    CollisionLog,
    MultiConfig,
    MultiRunResult,
    detect_collision,
    run_multi,
)

__all__ = [
    "CONTINUE",
    "DIVERSIFY",
    "EVAL_BUDGET",
    "INFEASIBLE_VALUE",
    "IMPROVED",
    "INTENSIFY",
    "MAXIMIZE",
    "MINIMIZE",
    "NOT_IMPROVED",
    "REDUCE_STEP",
    "STALLED",
    "STEP_FLOOR",
    "CircuitParams",
    "CircuitState",
    "CircuitTargets",
    "CollisionLog",
    "EvalCounter",
    "IntermediateMemory",
    "MultiConfig",
    "MultiRunResult",
    "Objective",
    "ParameterSpace",
    "RunResult",
    "SearchConfig",
    "SearchPoint",
    "TabuList",
    "ThreadState",
    "apply_action",
    "bump_feasible",
    "bump_value",
    "circuit_objective",
    "clamp",
    "control_decision",
    "denormalize",
    "detect_collision",
    "evaluate",
    "explore",
    "hj_step",
    "keane_bump",
    "make_bump",
    "make_circuit",
    "make_schwefel10",
    "normalize",
    "pattern_move",
    "run_multi",
    "run_single",
    "simulate_steady",
]
