# This file is part of the FQR-T fluid model toolkit (fqrt-fluid).
#
# Copyright (c) 2021-2022 New York University.
#
# fqrt-fluid is released under the Revised BSD License. See file LICENSE for
# full license details.

"""State of the n-th six-dimensional CTMC and the FQR-T transition logic.

The system state is (Q1, Q2, Z11, Z12, Z21, Z22) where Zij is the number of
class-i customers in service in pool j. Eight primitive events drive the
chain: arrivals of both classes, service completions for each (class, pool)
pair, and abandonments from both queues. After a service completion the
freed agent serves the other class only if sharing in that direction is
active, i.e., the weighted queue difference exceeds its threshold, no
customer is shared in the opposite direction, and the other queue is not
empty.
"""

from typing import List, NamedTuple, Optional, Tuple

from fqrt_fluid.error import IllegalStateError
from fqrt_fluid.model.base import FluidState, ScaledInstance
from fqrt_fluid.model.core import round_half_up
from fqrt_fluid.rng import RandomStream


class SystemState(NamedTuple):
    """Queue lengths and numbers of customers in service."""
    Q1: int
    Q2: int
    Z11: int
    Z12: int
    Z21: int
    Z22: int


"""Labels of the primitive events (in the order of the rate vector)."""
ARRIVAL_1 = 'arrival_1'
ARRIVAL_2 = 'arrival_2'
SERVICE_11 = 'service_11'
SERVICE_12 = 'service_12'
SERVICE_21 = 'service_21'
SERVICE_22 = 'service_22'
ABANDON_1 = 'abandon_1'
ABANDON_2 = 'abandon_2'

EVENTS = (
    ARRIVAL_1, ARRIVAL_2, SERVICE_11, SERVICE_12, SERVICE_21, SERVICE_22,
    ABANDON_1, ABANDON_2
)


def check_state(state: SystemState, inst: ScaledInstance):
    """Raise an error if the state violates the capacity constraints, the
    one-way sharing rule, or leaves a customer waiting while an agent of its
    own pool is idle.

    Parameters
    ----------
    state: fqrt_fluid.ctmc.state.SystemState
        System state.
    inst: fqrt_fluid.model.base.ScaledInstance
        Scaled instance.

    Raises
    ------
    fqrt_fluid.error.IllegalStateError
    """
    Q1, Q2, Z11, Z12, Z21, Z22 = state
    if min(state) < 0:
        raise IllegalStateError('negative component in {}'.format(tuple(state)))
    if Z11 + Z21 > inst.m1_n or Z12 + Z22 > inst.m2_n:
        raise IllegalStateError('pool capacity exceeded in {}'.format(tuple(state)))
    if Z12 > 0 and Z21 > 0:
        raise IllegalStateError('two-way sharing in {}'.format(tuple(state)))
    if Q1 > 0 and Z11 + Z21 < inst.m1_n:
        raise IllegalStateError('class 1 waits while pool 1 is idle in {}'.format(tuple(state)))
    if Q2 > 0 and Z12 + Z22 < inst.m2_n:
        raise IllegalStateError('class 2 waits while pool 2 is idle in {}'.format(tuple(state)))


def initial_state(inst: ScaledInstance, x0: FluidState) -> SystemState:
    """Get the system state round(n * x0) with both pools full and no
    class-2 customers in pool 1.

    Parameters
    ----------
    inst: fqrt_fluid.model.base.ScaledInstance
        Scaled instance.
    x0: fqrt_fluid.model.base.FluidState
        Initial fluid state.

    Returns
    -------
    fqrt_fluid.ctmc.state.SystemState
    """
    n = inst.n
    Z12 = min(round_half_up(n * x0.z12), inst.m2_n)
    return SystemState(
        Q1=round_half_up(n * x0.q1),
        Q2=round_half_up(n * x0.q2),
        Z11=inst.m1_n,
        Z12=Z12,
        Z21=0,
        Z22=inst.m2_n - Z12
    )


def sharing_flags(state: SystemState, inst: ScaledInstance) -> Tuple[bool, bool]:
    """Get the flags for active sharing 1->2 (pool 2 takes class 1) and 2->1
    (pool 1 takes class 2). The queue differences are evaluated in exact
    integer arithmetic.

    Parameters
    ----------
    state: fqrt_fluid.ctmc.state.SystemState
        System state.
    inst: fqrt_fluid.model.base.ScaledInstance
        Scaled instance.

    Returns
    -------
    tuple of bool
    """
    return _sharing(state.Q1, state.Q2, state.Z12, state.Z21, transition_constants(inst))


def event_rates(state: SystemState, inst: ScaledInstance) -> Tuple[float, ...]:
    """Get the rates of the eight primitive events in the given state (in the
    order of EVENTS).
    """
    p = inst.params
    Q1, Q2, Z11, Z12, Z21, Z22 = state
    return (
        float(inst.lambda1_n), float(inst.lambda2_n),
        p.mu11 * Z11, p.mu12 * Z12, p.mu21 * Z21, p.mu22 * Z22,
        p.theta1 * Q1, p.theta2 * Q2
    )


def next_event(
    state: SystemState, inst: ScaledInstance, rng: RandomStream
) -> Tuple[float, SystemState, Optional[str]]:
    """Draw the time until the next event and the next state. The dwell time
    is exponential with the total event rate and the event is selected with
    probability proportional to its rate. If no event is possible the dwell
    time is infinite and the state does not change.

    Parameters
    ----------
    state: fqrt_fluid.ctmc.state.SystemState
        Current (legal) system state.
    inst: fqrt_fluid.model.base.ScaledInstance
        Scaled instance.
    rng: fqrt_fluid.rng.RandomStream
        Random stream.

    Returns
    -------
    tuple of float, fqrt_fluid.ctmc.state.SystemState, string

    Raises
    ------
    fqrt_fluid.error.IllegalStateError
    """
    check_state(state, inst)
    rates = event_rates(state, inst)
    total = sum(rates)
    if total <= 0:
        return float('inf'), state, None
    dwell = rng.exponential(total)
    event = select_event(rates, rng.uniform() * total)
    next_state = SystemState(*apply_event(event, *state, transition_constants(inst)))
    check_state(next_state, inst)
    return dwell, next_state, EVENTS[event]


# -- Transition logic ---------------------------------------------------------

def transition_constants(inst: ScaledInstance) -> Tuple[int, ...]:
    """Integer constants of the transition logic (m1, m2, j12, k12,
    threshold12, j21, k21, threshold21).
    """
    p = inst.params
    return (
        inst.m1_n, inst.m2_n,
        p.r12.numerator, p.r12.denominator, inst.k12_n,
        p.r21.numerator, p.r21.denominator, inst.k21_n
    )


def _sharing(Q1: int, Q2: int, Z12: int, Z21: int, const: Tuple[int, ...]) -> Tuple[bool, bool]:
    _, _, j12, k12, t12, j21, k21, t21 = const
    # D12 = Q1 - t12 - (j12/k12) * Q2 and D21 = (j21/k21) * Q2 - t21 - Q1,
    # both multiplied by the positive denominator.
    share12 = k12 * Q1 - k12 * t12 - j12 * Q2 > 0 and Z21 == 0 and Q1 > 0
    share21 = j21 * Q2 - k21 * t21 - k21 * Q1 > 0 and Z12 == 0 and Q2 > 0
    return share12, share21


def select_event(rates: Tuple[float, ...], u: float) -> int:
    """Index of the event for a uniform value u in [0, sum(rates))."""
    last = 0
    for event, rate in enumerate(rates):
        if rate > 0:
            if u < rate:
                return event
            u -= rate
            last = event
    return last


def apply_event(
    event: int, Q1: int, Q2: int, Z11: int, Z12: int, Z21: int, Z22: int,
    const: Tuple[int, ...]
) -> Tuple[int, int, int, int, int, int]:
    """Apply the primitive event with the given index to a state."""
    if event == 0:
        if Z11 + Z21 < const[0]:
            Z11 += 1
        else:
            Q1 += 1
    elif event == 1:
        if Z12 + Z22 < const[1]:
            Z22 += 1
        else:
            Q2 += 1
    elif event <= 5:
        if event == 2:
            Z11 -= 1
        elif event == 3:
            Z12 -= 1
        elif event == 4:
            Z21 -= 1
        else:
            Z22 -= 1
        share12, share21 = _sharing(Q1, Q2, Z12, Z21, const)
        if event in (3, 5):
            # Agent in pool 2 became available.
            if share12:
                Q1 -= 1
                Z12 += 1
            elif Q2 > 0:
                Q2 -= 1
                Z22 += 1
        else:
            # Agent in pool 1 became available.
            if share21:
                Q2 -= 1
                Z21 += 1
            elif Q1 > 0:
                Q1 -= 1
                Z11 += 1
    elif event == 6:
        Q1 -= 1
    else:
        Q2 -= 1
    return Q1, Q2, Z11, Z12, Z21, Z22


def count_event(counters: List[int], event: int, q1: int, q2: int, Q1: int, Q2: int):
    """Update the cumulative counters (A1, A2, S11, S12, S21, S22, U1, U2,
    admitted1, admitted2) for an event that changed the queue lengths from
    (q1, q2) to (Q1, Q2).
    """
    counters[event] += 1
    if event < 2:
        # Arrivals that do not join the queue enter service directly.
        if Q1 == q1 and Q2 == q2:
            counters[8 + event] += 1
    elif event < 6:
        if Q1 < q1:
            counters[8] += 1
        elif Q2 < q2:
            counters[9] += 1
