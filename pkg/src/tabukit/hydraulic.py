"""Steady-state surrogate of a two-motor hydraulic circuit.

A fixed-displacement pump feeds two pressure-compensated flow-control
valves, each driving a motor; surplus flow spills over a relief valve.
The valves are ideal flow limiters, so the steady state is pure flow
bookkeeping: no pressure dynamics, no leakage. The sizing objective
penalizes squared motor-speed errors, inflated by the fraction of pump
flow wasted over the relief valve.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import MINIMIZE, Objective, ParameterSpace

PROPORTIONAL = "proportional"
PRIORITY = "priority"
STARVATION_POLICIES = (PROPORTIONAL, PRIORITY)

PUMP_DISP_BOUNDS = (1.0, 1000.0)
MOTOR_DISP_BOUNDS = (1.0, 1000.0)
VALVE_FLOW_BOUNDS = (10.0, 100.0)


@dataclass(frozen=True)
class CircuitParams:
    """Component sizes: displacements in cc/rev, valve settings in L/min."""

    pump_disp: float
    motor1_disp: float
    motor2_disp: float
    pcfv1_flow: float
    pcfv2_flow: float

    def __post_init__(self) -> None:
        for name, value, (lo, hi) in (
            ("pump_disp", self.pump_disp, PUMP_DISP_BOUNDS),
            ("motor1_disp", self.motor1_disp, MOTOR_DISP_BOUNDS),
            ("motor2_disp", self.motor2_disp, MOTOR_DISP_BOUNDS),
            ("pcfv1_flow", self.pcfv1_flow, VALVE_FLOW_BOUNDS),
            ("pcfv2_flow", self.pcfv2_flow, VALVE_FLOW_BOUNDS),
        ):
            if not lo <= value <= hi:
                raise ValueError(f"{name}={value} outside [{lo}, {hi}]")


@dataclass(frozen=True)
class CircuitTargets:
    """Demanded motor speeds (rev/min) and the fixed pump shaft speed."""

    omega1_target: float = 120.0
    omega2_target: float = 60.0
    # Standard 50 Hz industrial drive speed; the model treats it as constant.
    pump_speed: float = 1500.0


@dataclass(frozen=True)
class CircuitState:
    """Steady-state flows (L/min) and motor speeds (rev/min)."""

    omega1: float
    omega2: float
    q_pump: float
    q1: float
    q2: float
    q_rv: float


def _split_supply(supply: float, first_share: float, second_demand: float):
    """Split ``supply`` into three parts that sum back exactly.

    Returns (q1, q2, q_rv) with q1 + q2 + q_rv == supply as an exact
    real-arithmetic identity. Each rounded subtraction is closed by
    re-deriving the counterpart from the rounded result (the difference
    of a float and a nearby rounded difference is itself exact), so the
    rounding error lands inside the parts instead of breaking the sum.
    """
    rest = supply - min(first_share, supply)
    q1 = supply - rest
    q_rv = rest - min(second_demand, rest)
    q2 = rest - q_rv
    return q1, q2, q_rv


def simulate_steady(
    params: CircuitParams,
    targets: CircuitTargets | None = None,
    policy: str = PROPORTIONAL,
) -> CircuitState:
    """Solve the circuit's steady state.

    Pump delivery is pump_disp * pump_speed / 1000 L/min. When the two
    valve settings fit within it, each branch gets its demand and the
    relief valve spills the surplus. When demand exceeds supply nothing
    spills and the shortfall is shared per ``policy``: "proportional"
    scales both demands by the same factor, "priority" serves branch 1
    first. Motor speed is branch flow * 1000 / motor displacement.
    """
    targets = targets or CircuitTargets()
    if policy not in STARVATION_POLICIES:
        raise ValueError(f"unknown starvation policy: {policy!r}")

    q_pump = params.pump_disp * targets.pump_speed / 1000.0
    d1 = params.pcfv1_flow
    d2 = params.pcfv2_flow

    if d1 + d2 <= q_pump:
        share1 = d1
    elif policy == PRIORITY:
        share1 = min(d1, q_pump)
    else:
        share1 = d1 * q_pump / (d1 + d2)
    q1, q2, q_rv = _split_supply(q_pump, share1, d2)

    return CircuitState(
        omega1=q1 * 1000.0 / params.motor1_disp,
        omega2=q2 * 1000.0 / params.motor2_disp,
        q_pump=q_pump,
        q1=q1,
        q2=q2,
        q_rv=q_rv,
    )


def circuit_objective(
    params: CircuitParams,
    targets: CircuitTargets | None = None,
    policy: str = PROPORTIONAL,
) -> float:
    """Squared speed errors scaled up by the wasted-flow fraction.

    (e1^2 + e2^2) * (1 + q_rv / q_pump); zero exactly when both motors
    run on target, regardless of spill.
    """
    targets = targets or CircuitTargets()
    state = simulate_steady(params, targets, policy)
    e1 = state.omega1 - targets.omega1_target
    e2 = state.omega2 - targets.omega2_target
    return (e1 * e1 + e2 * e2) * (1.0 + state.q_rv / state.q_pump)


def make_circuit(
    targets: CircuitTargets | None = None,
    policy: str = PROPORTIONAL,
) -> Objective:
    """Circuit sizing objective over (pump, motor1, motor2, valve1, valve2)."""
    targets = targets or CircuitTargets()
    if policy not in STARVATION_POLICIES:
        raise ValueError(f"unknown starvation policy: {policy!r}")
    space = ParameterSpace(
        lower=np.array([1.0, 1.0, 1.0, 10.0, 10.0]),
        upper=np.array([1000.0, 1000.0, 1000.0, 100.0, 100.0]),
        min_step=np.full(5, 1e-4),
    )

    def fn(raw: np.ndarray) -> tuple[float, bool]:
        params = CircuitParams(*raw)
        return circuit_objective(params, targets, policy), True

    return Objective(space=space, fn=fn, sense=MINIMIZE, name="circuit")
