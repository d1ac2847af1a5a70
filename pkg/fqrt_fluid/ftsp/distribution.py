# This file is part of the FQR-T fluid model toolkit (fqrt-fluid).
#
# Copyright (c) 2021-2022 New York University.
#
# fqrt-fluid is released under the Revised BSD License. See file LICENSE for
# full license details.

"""Stationary distribution of the fast-time-scale process and the limiting
probability pi_12(gamma) that drives the fluid ODE.
"""

from __future__ import annotations
from dataclasses import dataclass
from typing import Optional

import numpy as np
import pandas as pd

from fqrt_fluid.error import NotInAError
from fqrt_fluid.ftsp.qbd import (
    QbdSolution, QbdSolver, build_qbd, lattice_value, qbd_positive_recurrent,
    stationary_vector
)
from fqrt_fluid.ftsp.rates import ftsp_rates
from fqrt_fluid.model.base import FluidState, ModelParams, Region
from fqrt_fluid.model.core import classify_region, drift_pair


"""Default truncation of the matrix-geometric expansion."""
DEFAULT_TAIL_EPSILON = 1e-10

"""Default truncation of the brute-force generator (in multiples of k)."""
DEFAULT_TRUNCATION = 200

"""Upper bound for the number of levels in the expansion."""
MAX_LEVELS = 1000000


@dataclass(frozen=True)
class FtspDistribution:
    """Stationary probabilities of the FTSP on the integer lattice. Values are
    in units of 1/k of the queue-difference scale. The support is sorted and
    the masses may miss a tail of total probability below tail_epsilon.
    """
    support: np.ndarray
    mass: np.ndarray
    k: int
    tail_epsilon: float = 0.0

    def differences(self) -> np.ndarray:
        """Support values on the queue-difference scale."""
        return self.support / self.k

    def positive_mass(self) -> float:
        """Probability of strictly positive values."""
        return float(np.sum(self.mass[self.support > 0]))

    def total(self) -> float:
        """Total mass of the (possibly truncated) distribution."""
        return float(np.sum(self.mass))

    def to_frame(self) -> pd.DataFrame:
        """Get data frame with columns value (lattice value) and mass."""
        return pd.DataFrame({'value': self.support, 'mass': self.mass})


def zero_atom(distribution: FtspDistribution) -> float:
    """Probability mass at lattice value zero. This is the difference between
    the probabilities P(D >= 0) and P(D > 0).
    """
    return float(np.sum(distribution.mass[distribution.support == 0]))


def total_variation(d1: FtspDistribution, d2: FtspDistribution) -> float:
    """Total variation distance between two lattice distributions. Mass that
    is outside the support of one of them counts fully.
    """
    values = np.union1d(d1.support, d2.support)
    p1 = pd.Series(d1.mass, index=d1.support).reindex(values, fill_value=0.0)
    p2 = pd.Series(d2.mass, index=d2.support).reindex(values, fill_value=0.0)
    return 0.5 * float(np.sum(np.abs(p1.values - p2.values)))


# -- Stationary probability of the positive side ------------------------------

def pi_12(
    gamma: FluidState, p: ModelParams, solver: Optional[QbdSolver] = None,
    atol: Optional[float] = 0.0
) -> float:
    """Get the limiting probability that the FTSP at gamma is strictly
    positive. Outside of the positive recurrence region the value is 1 (for
    states in S+ and A+) or 0 (for states in S- and A-).

    Parameters
    ----------
    gamma: fqrt_fluid.model.base.FluidState
        Fluid state.
    p: fqrt_fluid.model.base.ModelParams
        Model parameters.
    solver: fqrt_fluid.ftsp.qbd.QbdSolver, default=None
        Solver for the QBD. A new default solver is used if not given.
    atol: float, default=0
        Tolerance for the switching surface in the region classification.

    Returns
    -------
    float

    Raises
    ------
    fqrt_fluid.error.DriftTestMismatchError
    fqrt_fluid.error.NonConvergenceError
    fqrt_fluid.error.SingularBoundaryError
    """
    region = classify_region(gamma, p, atol=atol)
    if region in (Region.S_PLUS, Region.BOUNDARY_A_PLUS):
        return 1.0
    elif region in (Region.S_MINUS, Region.BOUNDARY_A_MINUS):
        return 0.0
    return solve_ftsp(gamma, p, solver=solver).pi_positive


def solve_ftsp(
    gamma: FluidState, p: ModelParams, solver: Optional[QbdSolver] = None
) -> QbdSolution:
    """Build and solve the QBD of the FTSP at a state in the positive
    recurrence region. The drift criterion is cross-checked against the
    mean-drift test unless the solver runs without diagnostics.

    Raises
    ------
    fqrt_fluid.error.NotInAError
    """
    solver = solver if solver is not None else QbdSolver(warm_start=False)
    blocks = build_qbd(gamma, p)
    if solver.diagnostics:
        recurrent = qbd_positive_recurrent(blocks, gamma, p)
    else:
        delta_minus, delta_plus = drift_pair(gamma, p)
        recurrent = delta_minus > 0 > delta_plus
    if not recurrent:
        raise NotInAError('FTSP at {} is not positive recurrent'.format(tuple(gamma)))
    return solver.solve(blocks)


def balance_pi(gamma: FluidState, p: ModelParams) -> float:
    """Closed-form value of pi_12 on the positive recurrence region. The
    stationary mean drift of the FTSP vanishes, so the probability pi of the
    positive side satisfies pi * delta_plus + (1 - pi) * delta_minus = 0.

    Parameters
    ----------
    gamma: fqrt_fluid.model.base.FluidState
        Fluid state.
    p: fqrt_fluid.model.base.ModelParams
        Model parameters.

    Returns
    -------
    float

    Raises
    ------
    fqrt_fluid.error.NotInAError
    """
    delta_minus, delta_plus = drift_pair(gamma, p)
    if not delta_minus > 0 > delta_plus:
        raise NotInAError('drifts ({:.12g}, {:.12g})'.format(delta_minus, delta_plus))
    return delta_minus / (delta_minus - delta_plus)


# -- Stationary distributions -------------------------------------------------

def ftsp_stationary_distribution(
    gamma: FluidState, p: ModelParams,
    tail_epsilon: Optional[float] = DEFAULT_TAIL_EPSILON,
    solver: Optional[QbdSolver] = None, atol: Optional[float] = 0.0
) -> FtspDistribution:
    """Expand the matrix-geometric solution alpha0 * R^i into probabilities
    for the individual lattice values until the remaining tail mass drops
    below tail_epsilon.

    Parameters
    ----------
    gamma: fqrt_fluid.model.base.FluidState
        Fluid state in the positive recurrence region.
    p: fqrt_fluid.model.base.ModelParams
        Model parameters.
    tail_epsilon: float, default=1e-10
        Truncation bound for the tail mass.
    solver: fqrt_fluid.ftsp.qbd.QbdSolver, default=None
        Solver for the QBD.
    atol: float, default=0
        Tolerance for the switching surface in the region classification.

    Returns
    -------
    fqrt_fluid.ftsp.distribution.FtspDistribution

    Raises
    ------
    fqrt_fluid.error.NotInAError
    """
    region = classify_region(gamma, p, atol=atol)
    if region != Region.BOUNDARY_A:
        raise NotInAError('state {} is in region {}'.format(tuple(gamma), region.label))
    solution = solve_ftsp(gamma, p, solver=solver)
    m = solution.R.shape[0] // 2
    values, masses = list(), list()
    vector = solution.alpha0
    accumulated = 0.0
    level = 0
    while 1.0 - accumulated >= tail_epsilon and level < MAX_LEVELS:
        for phase, mass in enumerate(vector):
            values.append(lattice_value(level, phase, m))
            masses.append(max(float(mass), 0.0))
        accumulated += float(np.sum(vector))
        vector = vector @ solution.R
        level += 1
    order = np.argsort(values)
    return FtspDistribution(
        support=np.array(values, dtype=np.int64)[order],
        mass=np.array(masses)[order],
        k=p.r12.denominator,
        tail_epsilon=tail_epsilon
    )


def truncated_stationary_distribution(
    gamma: FluidState, p: ModelParams, bound: Optional[int] = DEFAULT_TRUNCATION
) -> FtspDistribution:
    """Brute-force stationary distribution of the FTSP generator restricted
    to the lattice values -bound*k, ..., bound*k. Transitions that would leave
    the window are suppressed. Independent of the matrix-geometric solver and
    used to validate it.

    Parameters
    ----------
    gamma: fqrt_fluid.model.base.FluidState
        Fluid state.
    p: fqrt_fluid.model.base.ModelParams
        Model parameters.
    bound: int, default=200
        Truncation bound in multiples of k.

    Returns
    -------
    fqrt_fluid.ftsp.distribution.FtspDistribution
    """
    rates = ftsp_rates(gamma, p)
    j, k = p.r12.numerator, p.r12.denominator
    low, high = -bound * k, bound * k
    size = high - low + 1
    Q = np.zeros((size, size))
    for i in range(size):
        value = low + i
        lam1, lamR, mu1, muR = rates.side(value > 0)
        for jump, rate in [(k, lam1), (j, lamR), (-k, mu1), (-j, muR)]:
            target = value + jump
            if low <= target <= high and rate > 0:
                Q[i, target - low] += rate
                Q[i, i] -= rate
    mass = stationary_vector(Q)
    return FtspDistribution(
        support=np.arange(low, high + 1, dtype=np.int64),
        mass=np.maximum(mass, 0.0),
        k=k
    )

