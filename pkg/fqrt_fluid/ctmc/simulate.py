# This file is part of the FQR-T fluid model toolkit (fqrt-fluid).
#
# Copyright (c) 2021-2022 New York University.
#
# fqrt-fluid is released under the Revised BSD License. See file LICENSE for
# full license details.

"""Event-by-event simulation of the n-th system (direct method) with states
sampled on a uniform time grid, the fluid scaling of sample paths and the
queue-difference processes.
"""

from __future__ import annotations
from dataclasses import dataclass
from typing import Dict, Optional

import logging
import math

import numpy as np
import pandas as pd

from fqrt_fluid.ctmc.state import (
    SystemState, apply_event, check_state, count_event, select_event,
    transition_constants
)
from fqrt_fluid.fluid.trajectory import Trajectory
from fqrt_fluid.model.base import ScaledInstance
from fqrt_fluid.rng import RandomStream, Seed


logger = logging.getLogger(__name__)


"""Default resolution of the sampling grid (fluid time units)."""
DEFAULT_DT_SAMPLE = 0.01

"""Names of the state components and of the cumulative counters."""
STATE_COLUMNS = ['Q1', 'Q2', 'Z11', 'Z12', 'Z21', 'Z22']
COUNTERS = ['A1', 'A2', 'S11', 'S12', 'S21', 'S22', 'U1', 'U2', 'admitted1', 'admitted2']


def grid_size(T: float, dt_sample: float) -> int:
    """Number of grid points t = i * dt_sample in [0, T]."""
    return int(math.floor(T / dt_sample + 1e-9)) + 1


@dataclass(frozen=True)
class SamplePath:
    """Sample path of the n-th system on the grid i * dt_sample. The counter
    array holds the cumulative numbers of arrivals (A), service completions
    (S), abandonments (U) and admissions to service (directly on arrival or
    from the queue) at each grid time. The raw event log is optional.
    """
    n: int
    dt_sample: float
    times: np.ndarray
    states: np.ndarray
    counts: np.ndarray
    events: int
    event_times: Optional[np.ndarray] = None
    event_states: Optional[np.ndarray] = None

    def state(self, index: int) -> SystemState:
        return SystemState(*[int(x) for x in self.states[index]])

    def final(self) -> SystemState:
        return self.state(len(self.times) - 1)

    @property
    def counters(self) -> Dict[str, int]:
        """Counter values at the end of the path."""
        return {key: int(value) for key, value in zip(COUNTERS, self.counts[-1])}

    def to_frame(self) -> pd.DataFrame:
        """Get data frame with columns t, Q1, Q2, Z11, Z12, Z21, Z22."""
        df = pd.DataFrame(self.states, columns=STATE_COLUMNS)
        df.insert(0, 't', self.times)
        return df


def simulate(
    inst: ScaledInstance, init: SystemState, T: float, seed: Seed,
    dt_sample: Optional[float] = DEFAULT_DT_SAMPLE,
    record_events: Optional[bool] = False
) -> SamplePath:
    """Simulate the n-th system over [0, T]. Grid samples are right-continuous,
    i.e., an event at a grid time is included in the sample at that time.

    Parameters
    ----------
    inst: fqrt_fluid.model.base.ScaledInstance
        Scaled instance.
    init: fqrt_fluid.ctmc.state.SystemState
        Initial state.
    T: float
        Horizon.
    seed: int or numpy.random.SeedSequence
        Seed for the random stream.
    dt_sample: float, default=0.01
        Resolution of the sampling grid.
    record_events: bool, default=False
        Keep the time and state of every event.

    Returns
    -------
    fqrt_fluid.ctmc.simulate.SamplePath

    Raises
    ------
    fqrt_fluid.error.IllegalStateError
    """
    check_state(init, inst)
    p = inst.params
    const = transition_constants(inst)
    lam1, lam2 = float(inst.lambda1_n), float(inst.lambda2_n)
    mu11, mu12, mu21, mu22 = p.mu11, p.mu12, p.mu21, p.mu22
    theta1, theta2 = p.theta1, p.theta2
    stream = RandomStream(seed)
    size = grid_size(T, dt_sample)
    times = dt_sample * np.arange(size)
    states = np.empty((size, 6), dtype=np.int64)
    counts = np.empty((size, len(COUNTERS)), dtype=np.int64)
    counters = [0] * len(COUNTERS)
    event_times, event_states = list(), list()
    Q1, Q2, Z11, Z12, Z21, Z22 = init
    t, g, events = 0.0, 0, 0
    while True:
        rates = (
            lam1, lam2, mu11 * Z11, mu12 * Z12, mu21 * Z21, mu22 * Z22,
            theta1 * Q1, theta2 * Q2
        )
        total = sum(rates)
        t_next = t + stream.exponential(total) if total > 0 else math.inf
        while g < size and (times[g] < t_next or t_next > T):
            states[g] = (Q1, Q2, Z11, Z12, Z21, Z22)
            counts[g] = counters
            g += 1
        if t_next > T:
            break
        event = select_event(rates, stream.uniform() * total)
        q1, q2 = Q1, Q2
        Q1, Q2, Z11, Z12, Z21, Z22 = apply_event(event, Q1, Q2, Z11, Z12, Z21, Z22, const)
        count_event(counters, event, q1, q2, Q1, Q2)
        events += 1
        t = t_next
        if record_events:
            event_times.append(t)
            event_states.append((Q1, Q2, Z11, Z12, Z21, Z22))
    logger.debug('n=%d: %d events over [0, %g]', inst.n, events, T)
    return SamplePath(
        n=inst.n,
        dt_sample=dt_sample,
        times=times,
        states=states,
        counts=counts,
        events=events,
        event_times=np.array(event_times) if record_events else None,
        event_states=np.array(event_states, dtype=np.int64).reshape(-1, 6) if record_events else None
    )


def scale_path(path: SamplePath, n: int) -> Trajectory:
    """Divide a sample path by n. The trajectory holds (Q1, Q2, Z12) / n and
    the auxiliary coordinates (Z11, Z21, Z22) / n.

    Parameters
    ----------
    path: fqrt_fluid.ctmc.simulate.SamplePath
        Grid-sampled path.
    n: int
        Scale index.

    Returns
    -------
    fqrt_fluid.fluid.trajectory.Trajectory
    """
    return Trajectory(
        t0=0.0,
        h=path.dt_sample,
        states=path.states[:, [0, 1, 3]] / n,
        aux=path.states[:, [2, 4, 5]] / n
    )


def queue_difference(
    path: SamplePath, inst: ScaledInstance, pair: Optional[str] = '12',
    lattice: Optional[bool] = False
) -> np.ndarray:
    """Get the queue-difference process on the sample grid. For pair '12' the
    process is D12 = Q1 - k12 - r12 * Q2, for pair '21' it is D21 = r21 * Q2 -
    k21 - Q1. The values are computed as integers on the lattice of the ratio
    denominator k, i.e., k * D, and divided by k unless lattice is True.

    Parameters
    ----------
    path: fqrt_fluid.ctmc.simulate.SamplePath
        Grid-sampled path.
    inst: fqrt_fluid.model.base.ScaledInstance
        Scaled instance.
    pair: string, default='12'
        Either '12' or '21'.
    lattice: bool, default=False
        Return the integer lattice values k * D.

    Returns
    -------
    numpy.ndarray
    """
    Q1, Q2 = path.states[:, 0], path.states[:, 1]
    p = inst.params
    if pair == '12':
        j, k = p.r12.numerator, p.r12.denominator
        values = k * Q1 - k * inst.k12_n - j * Q2
    elif pair == '21':
        j, k = p.r21.numerator, p.r21.denominator
        values = j * Q2 - k * inst.k21_n - k * Q1
    else:
        raise ValueError("unknown pair '{}'".format(pair))
    return values if lattice else values / k
