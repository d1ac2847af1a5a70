# This file is part of the FQR-T fluid model toolkit (fqrt-fluid).
#
# Copyright (c) 2021-2022 New York University.
#
# fqrt-fluid is released under the Revised BSD License. See file LICENSE for
# full license details.

"""Coupled construction of the n-th system and its bounding processes.

All processes are driven by eight marked Poisson streams, one for each
primitive event, each with its own random generator. Every stream runs at a
rate that dominates the event rate of all processes it drives. A candidate
event at time t carries a uniform mark u and is an event of a particular
process if u is below the ratio of that process's rate to the dominating
rate. Since all processes share the marks, the following orderings hold on
every sample path:

- Z_a <= Z12 <= Z_b, where Z_a is a pure-death process (rate mu12 * Z_a) and
  Z_b a pure-birth process (rate mu22 * (m2 - Z_b)) started at Z12(0),
- Q_ia <= Q_i <= Q_ib, where Q_ib = Q_i(0) + A_i and Q_ia is decremented on
  every service candidate and on abandonments at rate theta_i * Q_i(0),
- Q_i <= Q_ibd, where Q_ibd = Q_i(0) + A_i - (abandonments at rate
  theta_i * Q_ibd) is an infinite-server type process.
"""

from __future__ import annotations
from dataclasses import dataclass
from typing import Dict, Optional

import math

import numpy as np
import pandas as pd

from fqrt_fluid.ctmc.simulate import COUNTERS, SamplePath, grid_size, DEFAULT_DT_SAMPLE
from fqrt_fluid.ctmc.state import (
    SystemState, apply_event, check_state, count_event, transition_constants
)
from fqrt_fluid.model.base import FluidState, ModelParams, ScaledInstance
from fqrt_fluid.rng import RandomStream, Seed, stream_seeds


"""Names of the bounding processes."""
BOUNDS = ['z_a', 'z_b', 'q1_a', 'q1_b', 'q2_a', 'q2_b', 'q1_bd', 'q2_bd']


@dataclass(frozen=True)
class CoupledPaths:
    """Main sample path and the bounding processes on the same grid. The
    number of events at which one of the orderings was violated is counted
    over all events (not only on the grid).
    """
    path: SamplePath
    bounds: np.ndarray
    violations: int

    def bound(self, name: str) -> np.ndarray:
        """Get the grid values of the bounding process with the given name."""
        return self.bounds[:, BOUNDS.index(name)]

    def to_frame(self) -> pd.DataFrame:
        df = self.path.to_frame()
        for i, name in enumerate(BOUNDS):
            df[name] = self.bounds[:, i]
        return df


def _ordered(Q1, Q2, Z12, za, zb, q1a, q1b, q2a, q2b, q1bd, q2bd) -> bool:
    return (
        za <= Z12 <= zb and q1a <= Q1 <= q1b and q2a <= Q2 <= q2b
        and Q1 <= q1bd and Q2 <= q2bd
    )


def coupled_bounds(
    inst: ScaledInstance, init: SystemState, T: float, seed: Seed,
    dt_sample: Optional[float] = DEFAULT_DT_SAMPLE
) -> CoupledPaths:
    """Simulate the n-th system together with its bounding processes from
    common marked Poisson streams.

    Parameters
    ----------
    inst: fqrt_fluid.model.base.ScaledInstance
        Scaled instance.
    init: fqrt_fluid.ctmc.state.SystemState
        Initial state.
    T: float
        Horizon.
    seed: int or numpy.random.SeedSequence
        Seed from which the eight stream seeds are derived.
    dt_sample: float, default=0.01
        Resolution of the sampling grid.

    Returns
    -------
    fqrt_fluid.ctmc.bounds.CoupledPaths

    Raises
    ------
    fqrt_fluid.error.IllegalStateError
    """
    check_state(init, inst)
    p = inst.params
    const = transition_constants(inst)
    m1, m2 = inst.m1_n, inst.m2_n
    streams = [RandomStream(s) for s in stream_seeds(seed, 8)]
    # Dominating rates of the arrival and service streams.
    fixed = [
        float(inst.lambda1_n), float(inst.lambda2_n),
        p.mu11 * m1, p.mu12 * m2, p.mu21 * m1, p.mu22 * m2
    ]
    pools = [None, None, m1, m2, m1, m2]
    theta = [p.theta1, p.theta2]
    Q1, Q2, Z11, Z12, Z21, Z22 = init
    q0 = [Q1, Q2]
    za = zb = Z12
    qa = [Q1, Q2]
    qb = [Q1, Q2]
    qbd = [Q1, Q2]
    tau = [streams[s].exponential(rate) if rate > 0 else math.inf for s, rate in enumerate(fixed)]
    dominating = [theta[i] * max(q0[i], qbd[i]) for i in range(2)]
    for i in range(2):
        rate = dominating[i]
        tau.append(streams[6 + i].exponential(rate) if rate > 0 else math.inf)
    size = grid_size(T, dt_sample)
    times = dt_sample * np.arange(size)
    states = np.empty((size, 6), dtype=np.int64)
    counts = np.empty((size, len(COUNTERS)), dtype=np.int64)
    bounds = np.empty((size, len(BOUNDS)), dtype=np.int64)
    counters = [0] * len(COUNTERS)
    g, events, violations = 0, 0, 0
    while True:
        s = min(range(8), key=tau.__getitem__)
        t = tau[s]
        while g < size and (times[g] < t or t > T):
            states[g] = (Q1, Q2, Z11, Z12, Z21, Z22)
            counts[g] = counters
            bounds[g] = (za, zb, qa[0], qb[0], qa[1], qb[1], qbd[0], qbd[1])
            g += 1
        if t > T:
            break
        u = streams[s].uniform()
        real = False
        if s < 2:
            real = True
            qb[s] += 1
            qbd[s] += 1
        elif s < 6:
            pool = pools[s]
            Z = (Z11, Z12, Z21, Z22)[s - 2]
            real = u * pool < Z
            qa[0] -= 1
            qa[1] -= 1
            if s == 3 and u * m2 < za:
                za -= 1
            elif s == 5 and u * m2 < m2 - zb:
                zb += 1
        else:
            i = s - 6
            level = u * dominating[i]
            real = level < theta[i] * (Q1, Q2)[i]
            if level < theta[i] * q0[i]:
                qa[i] -= 1
            if level < theta[i] * qbd[i]:
                qbd[i] -= 1
        if real:
            q1, q2 = Q1, Q2
            Q1, Q2, Z11, Z12, Z21, Z22 = apply_event(s, Q1, Q2, Z11, Z12, Z21, Z22, const)
            count_event(counters, s, q1, q2, Q1, Q2)
            events += 1
        if s < 6:
            tau[s] = t + streams[s].exponential(fixed[s])
        # Redraw the abandonment candidates whose dominating rate changed
        # (memoryless, so the construction stays exact).
        for i in range(2):
            rate = theta[i] * max((Q1, Q2)[i], q0[i], qbd[i])
            if rate != dominating[i] or s == 6 + i:
                dominating[i] = rate
                tau[6 + i] = t + streams[6 + i].exponential(rate) if rate > 0 else math.inf
        if not _ordered(Q1, Q2, Z12, za, zb, qa[0], qb[0], qa[1], qb[1], qbd[0], qbd[1]):
            violations += 1
    path = SamplePath(
        n=inst.n,
        dt_sample=dt_sample,
        times=times,
        states=states,
        counts=counts,
        events=events
    )
    return CoupledPaths(path=path, bounds=bounds, violations=violations)


def bound_fluid_limits(p: ModelParams, x0: FluidState, times: np.ndarray) -> pd.DataFrame:
    """Fluid limits of the scaled bounding processes.

    Parameters
    ----------
    p: fqrt_fluid.model.base.ModelParams
        Model parameters.
    x0: fqrt_fluid.model.base.FluidState
        Initial fluid state.
    times: numpy.ndarray
        Evaluation times.

    Returns
    -------
    pandas.DataFrame
    """
    t = np.asarray(times, dtype=float)
    service = p.mu11 * p.m1 + p.mu12 * p.m2 + p.mu21 * p.m1 + p.mu22 * p.m2
    doc: Dict[str, np.ndarray] = {'t': t}
    doc['z_a'] = x0.z12 * np.exp(-p.mu12 * t)
    doc['z_b'] = p.m2 - (p.m2 - x0.z12) * np.exp(-p.mu22 * t)
    for i, (lam, th, q) in enumerate([(p.lambda1, p.theta1, x0.q1), (p.lambda2, p.theta2, x0.q2)]):
        doc['q{}_a'.format(i + 1)] = q - (service + th * q) * t
        doc['q{}_b'.format(i + 1)] = q + lam * t
        doc['q{}_bd'.format(i + 1)] = lam / th + (q - lam / th) * np.exp(-th * t)
    return pd.DataFrame(doc)
