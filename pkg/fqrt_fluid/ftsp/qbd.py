# This file is part of the FQR-T fluid model toolkit (fqrt-fluid).
#
# Copyright (c) 2021-2022 New York University.
#
# fqrt-fluid is released under the Revised BSD License. See file LICENSE for
# full license details.

"""Quasi-birth-and-death (QBD) representation of the fast-time-scale process
and the matrix-geometric solver for its stationary distribution.

With r12 = j/k in lowest terms the FTSP multiplied by k lives on the integer
lattice with jumps +k, +j, -k and -j. With m = max(j, k) the lattice is split
into levels of 2m phases each. Level i >= 0 contains the positive values
i*m + 1, ..., (i+1)*m (phases 0, ..., m-1) and the nonpositive values
-i*m, ..., -i*m - (m-1) (phases m, ..., 2m-1). A jump never skips a level.
"""

from __future__ import annotations
from dataclasses import dataclass
from typing import List, Optional, Tuple

import logging
import math

import numpy as np
import scipy.linalg

from fqrt_fluid.error import (
    DriftTestMismatchError, NonConvergenceError, SingularBoundaryError
)
from fqrt_fluid.ftsp.rates import FtspRates, ftsp_rates
from fqrt_fluid.model.base import FluidState, ModelParams


logger = logging.getLogger(__name__)


"""Default solver settings."""
DEFAULT_TOL = 1e-13
DEFAULT_MAX_ITER = 1000000
DEFAULT_METHOD = 'logarithmic'

"""Iteration cap for the logarithmic reduction (the number of levels that are
covered doubles in each iteration).
"""
MAX_REDUCTION_STEPS = 128

"""Largest condition number that is accepted for the boundary equations."""
MAX_BOUNDARY_CONDITION = 1e12

"""Relative tolerance below which the two positive recurrence tests are not
compared (the drift is numerically zero).
"""
DRIFT_TEST_TOL = 1e-12

METHODS = ['functional', 'logarithmic']


# -- Lattice and blocks -------------------------------------------------------

def lattice_value(level: int, phase: int, m: int) -> int:
    """Get the lattice value for a (level, phase) pair."""
    if phase < m:
        return level * m + 1 + phase
    return -level * m - (phase - m)


def lattice_index(value: int, m: int) -> Tuple[int, int]:
    """Get the (level, phase) pair for a lattice value."""
    if value > 0:
        return (value - 1) // m, (value - 1) % m
    return (-value) // m, m + (-value) % m


@dataclass(frozen=True)
class QbdBlocks:
    """Block matrices of the QBD generator. B contains the transitions within
    level 0 (including the diagonal), A0, A1 and A2 the transitions to the
    next higher level, within a level, and to the next lower level. The
    transitions from level 0 to level 1 are given by A0, the transitions from
    level 1 to level 0 by A2.
    """
    m: int
    j: int
    k: int
    B: np.ndarray
    A0: np.ndarray
    A1: np.ndarray
    A2: np.ndarray
    rates: FtspRates

    @property
    def phases(self) -> int:
        return 2 * self.m

    def phase_values(self, level: int) -> np.ndarray:
        """Get the lattice values of all phases at a given level."""
        return np.array([lattice_value(level, ph, self.m) for ph in range(self.phases)])

    def positive_phases(self) -> np.ndarray:
        """Boolean mask for the phases with strictly positive values."""
        return np.arange(self.phases) < self.m


def _block_rows(rates: FtspRates, j: int, k: int, m: int, level: int) -> List[np.ndarray]:
    """Get the blocks [down, within, up] of the generator rows at the given
    level.
    """
    size = 2 * m
    blocks = [np.zeros((size, size)) for _ in range(3)]
    for phase in range(size):
        value = lattice_value(level, phase, m)
        lam1, lamR, mu1, muR = rates.side(value > 0)
        total = 0.0
        for jump, rate in [(k, lam1), (j, lamR), (-k, mu1), (-j, muR)]:
            if rate == 0:
                continue
            target_level, target_phase = lattice_index(value + jump, m)
            blocks[target_level - level + 1][phase, target_phase] += rate
            total += rate
        blocks[1][phase, phase] -= total
    return blocks


def build_blocks(rates: FtspRates, r: Tuple[int, int]) -> QbdBlocks:
    """Assemble the QBD blocks for a given set of FTSP rates and a queue ratio
    r = (j, k) in lowest terms.

    Parameters
    ----------
    rates: fqrt_fluid.ftsp.rates.FtspRates
        Transition rates of the FTSP.
    r: tuple of int
        Numerator and denominator of the queue ratio.

    Returns
    -------
    fqrt_fluid.ftsp.qbd.QbdBlocks
    """
    j, k = r
    m = max(j, k)
    _, B, A0 = _block_rows(rates, j, k, m, level=0)
    A2, A1, up = _block_rows(rates, j, k, m, level=1)
    assert np.array_equal(up, A0)
    return QbdBlocks(m=m, j=j, k=k, B=B, A0=A0, A1=A1, A2=A2, rates=rates)


def build_qbd(gamma: FluidState, p: ModelParams) -> QbdBlocks:
    """Assemble the QBD blocks of the FTSP at a fluid state.

    Parameters
    ----------
    gamma: fqrt_fluid.model.base.FluidState
        Fluid state.
    p: fqrt_fluid.model.base.ModelParams
        Model parameters.

    Returns
    -------
    fqrt_fluid.ftsp.qbd.QbdBlocks
    """
    return build_blocks(ftsp_rates(gamma, p), (p.r12.numerator, p.r12.denominator))


# -- Positive recurrence ------------------------------------------------------

def stationary_vector(Q: np.ndarray) -> np.ndarray:
    """Get the stationary row vector of an irreducible generator matrix. The
    last balance equation is replaced by the normalization condition.

    Parameters
    ----------
    Q: numpy.ndarray
        Generator matrix.

    Returns
    -------
    numpy.ndarray
    """
    size = Q.shape[0]
    M = Q.T.copy()
    M[-1, :] = 1.0
    rhs = np.zeros(size)
    rhs[-1] = 1.0
    return scipy.linalg.solve(M, rhs)


def mean_drift_test(blocks: QbdBlocks) -> Tuple[bool, List[Tuple[float, float]]]:
    """Mean-drift test nu * A0 * 1 < nu * A2 * 1 for the homogeneous levels.
    Positive and nonpositive phases do not communicate at levels above zero,
    so the test is applied to both classes of phases separately, with nu the
    stationary vector of A0 + A1 + A2 restricted to the class. Returns the
    result together with the (up, down) rates of each class.

    Parameters
    ----------
    blocks: fqrt_fluid.ftsp.qbd.QbdBlocks
        QBD blocks.

    Returns
    -------
    tuple of bool and list
    """
    A = blocks.A0 + blocks.A1 + blocks.A2
    positive = blocks.positive_phases()
    flows = list()
    for mask in [positive, ~positive]:
        idx = np.flatnonzero(mask)
        nu = stationary_vector(A[np.ix_(idx, idx)])
        up = float(nu @ blocks.A0[np.ix_(idx, idx)].sum(axis=1))
        down = float(nu @ blocks.A2[np.ix_(idx, idx)].sum(axis=1))
        flows.append((up, down))
    return all(up < down for up, down in flows), flows


def qbd_positive_recurrent(blocks: QbdBlocks, gamma: FluidState, p: ModelParams) -> bool:
    """Test whether the FTSP at gamma is positive recurrent, i.e., whether
    delta_minus > 0 > delta_plus. The result is cross-checked against the
    mean-drift test on the QBD blocks.

    Parameters
    ----------
    blocks: fqrt_fluid.ftsp.qbd.QbdBlocks
        QBD blocks that were built for gamma.
    gamma: fqrt_fluid.model.base.FluidState
        Fluid state.
    p: fqrt_fluid.model.base.ModelParams
        Model parameters.

    Returns
    -------
    bool

    Raises
    ------
    fqrt_fluid.error.DriftTestMismatchError
    """
    delta_minus, delta_plus = ftsp_rates(gamma, p).drifts(p.r)
    result = delta_minus > 0 > delta_plus
    test, flows = mean_drift_test(blocks)
    if test != result:
        # Ignore disagreements that are caused by a numerically zero drift.
        scale = max(1.0, np.max(np.abs(np.diag(blocks.A1))))
        margins = [abs(delta_minus), abs(delta_plus)] + [abs(up - down) for up, down in flows]
        if min(margins) > DRIFT_TEST_TOL * scale:
            raise DriftTestMismatchError(
                'drifts ({:.12g}, {:.12g}) disagree with mean-drift test {}'.format(
                    delta_minus, delta_plus, flows
                )
            )
    return result


# -- Matrix-geometric solution ------------------------------------------------

@dataclass(frozen=True)
class QbdSolution:
    """Rate matrix, boundary vector and solver diagnostics for a positive
    recurrent QBD. The level probabilities are alpha0 * R^i.
    """
    R: np.ndarray
    alpha0: np.ndarray
    pi_positive: float
    zero_mass: float
    spectral_radius_R: float
    residual: float
    iterations: int
    method: str

    def level_probabilities(self, level: int) -> np.ndarray:
        """Get the probability vector of the phases at the given level."""
        return self.alpha0 @ np.linalg.matrix_power(self.R, level)


def rate_matrix_residual(blocks: QbdBlocks, R: np.ndarray) -> float:
    """Max-norm residual of A0 + R * A1 + R^2 * A2."""
    return float(np.max(np.abs(blocks.A0 + R @ blocks.A1 + R @ R @ blocks.A2)))


def spectral_radius(R: np.ndarray) -> float:
    return float(np.max(np.abs(np.linalg.eigvals(R))))


def _functional_iteration(
    blocks: QbdBlocks, tol: float, max_iter: int, initial: Optional[np.ndarray]
) -> Tuple[np.ndarray, int, float]:
    """Iterate R <- -(A0 + R^2 * A2) * A1^-1 until the residual drops below
    the tolerance.
    """
    A0, A1, A2 = blocks.A0, blocks.A1, blocks.A2
    lu = scipy.linalg.lu_factor(A1)
    R = np.zeros_like(A0) if initial is None else initial.copy()
    residual = rate_matrix_residual(blocks, R)
    iterations = 0
    while residual > tol:
        if iterations >= max_iter:
            raise NonConvergenceError(
                'functional iteration stopped at residual {:.3g}'.format(residual),
                iterations=iterations,
                residual=residual
            )
        # Solve X * A1 = -(A0 + R^2 * A2) via the transposed system.
        R = scipy.linalg.lu_solve(lu, -(A0 + R @ R @ A2).T, trans=1).T
        iterations += 1
        residual = rate_matrix_residual(blocks, R)
    return R, iterations, residual


def _logarithmic_reduction(
    blocks: QbdBlocks, tol: float, max_iter: int
) -> Tuple[np.ndarray, int, float]:
    """Compute G (the minimal solution of A2 + A1 * G + A0 * G^2 = 0) by
    logarithmic reduction and derive R = A0 * (-A1 - A0 * G)^-1.
    """
    A0, A1, A2 = blocks.A0, blocks.A1, blocks.A2
    size = A0.shape[0]
    eye = np.eye(size)
    lu = scipy.linalg.lu_factor(-A1)
    B0 = scipy.linalg.lu_solve(lu, A0)
    B2 = scipy.linalg.lu_solve(lu, A2)
    G = B2.copy()
    T = B0.copy()
    iterations = 0
    limit = min(max_iter, MAX_REDUCTION_STEPS)
    while True:
        if iterations >= limit:
            residual = float(np.max(np.abs(1 - G.sum(axis=1))))
            raise NonConvergenceError(
                'logarithmic reduction stopped at residual {:.3g}'.format(residual),
                iterations=iterations,
                residual=residual
            )
        U = B0 @ B2 + B2 @ B0
        lu_u = scipy.linalg.lu_factor(eye - U)
        B0 = scipy.linalg.lu_solve(lu_u, B0 @ B0)
        B2 = scipy.linalg.lu_solve(lu_u, B2 @ B2)
        increment = T @ B2
        G = G + increment
        T = T @ B0
        iterations += 1
        if np.max(np.abs(1 - G.sum(axis=1))) < tol or np.max(np.abs(increment)) < tol:
            break
    R = A0 @ scipy.linalg.inv(-A1 - A0 @ G)
    return R, iterations, rate_matrix_residual(blocks, R)


def solve_boundary(blocks: QbdBlocks, R: np.ndarray) -> np.ndarray:
    """Solve alpha0 * (B + R * A2) = 0 with the normalization condition
    alpha0 * (I - R)^-1 * 1 = 1.

    Parameters
    ----------
    blocks: fqrt_fluid.ftsp.qbd.QbdBlocks
        QBD blocks.
    R: numpy.ndarray
        Rate matrix.

    Returns
    -------
    numpy.ndarray

    Raises
    ------
    fqrt_fluid.error.SingularBoundaryError
    """
    size = R.shape[0]
    eye = np.eye(size)
    try:
        w = scipy.linalg.solve(eye - R, np.ones(size))
        M = blocks.B + R @ blocks.A2
        # Replace the first balance equation by the normalization condition.
        M[:, 0] = w
        if np.linalg.cond(M) > MAX_BOUNDARY_CONDITION:
            raise SingularBoundaryError('boundary equations are ill-conditioned')
        rhs = np.zeros(size)
        rhs[0] = 1.0
        return scipy.linalg.solve(M.T, rhs)
    except (np.linalg.LinAlgError, ValueError) as ex:
        raise SingularBoundaryError('cannot solve boundary equations ({})'.format(ex))


def solve_rate_matrix(
    blocks: QbdBlocks, tol: Optional[float] = DEFAULT_TOL,
    max_iter: Optional[int] = DEFAULT_MAX_ITER, method: Optional[str] = DEFAULT_METHOD,
    initial: Optional[np.ndarray] = None, diagnostics: Optional[bool] = True
) -> QbdSolution:
    """Compute the minimal nonnegative solution R of A0 + R * A1 + R^2 * A2 = 0
    and the boundary vector alpha0 for a positive recurrent QBD.

    The tolerance applies to the max-norm residual relative to the largest
    total outflow rate of a phase (at least one), so that the result does not
    depend on a common scaling of all rates.

    Parameters
    ----------
    blocks: fqrt_fluid.ftsp.qbd.QbdBlocks
        QBD blocks.
    tol: float, default=1e-13
        Solver tolerance.
    max_iter: int, default=1000000
        Maximum number of iterations.
    method: string, default='logarithmic'
        Either 'functional' (functional iteration, optionally warm-started
        from a given initial iterate) or 'logarithmic' (logarithmic
        reduction).
    initial: numpy.ndarray, default=None
        Initial iterate for the functional iteration.
    diagnostics: bool, default=True
        Compute the spectral radius of R. If False the field is NaN.

    Returns
    -------
    fqrt_fluid.ftsp.qbd.QbdSolution

    Raises
    ------
    ValueError
    fqrt_fluid.error.NonConvergenceError
    fqrt_fluid.error.SingularBoundaryError
    """
    scale = max(1.0, float(np.max(np.abs(np.diag(blocks.A1)))))
    if method == 'functional':
        R, iterations, residual = _functional_iteration(
            blocks, tol * scale, max_iter, initial
        )
    elif method == 'logarithmic':
        R, iterations, residual = _logarithmic_reduction(blocks, tol, max_iter)
    else:
        raise ValueError("unknown method '{}'".format(method))
    logger.debug('%s solver: %d iterations, residual %.3g', method, iterations, residual)
    # Remove negative round-off entries of the minimal nonnegative solution.
    R = np.maximum(R, 0.0)
    alpha0 = solve_boundary(blocks, R)
    # Total mass per phase over all levels.
    phase_mass = scipy.linalg.solve((np.eye(R.shape[0]) - R).T, alpha0)
    return QbdSolution(
        R=R,
        alpha0=alpha0,
        pi_positive=float(np.sum(phase_mass[:blocks.m])),
        zero_mass=float(alpha0[blocks.m]),
        spectral_radius_R=spectral_radius(R) if diagnostics else math.nan,
        residual=residual,
        iterations=iterations,
        method=method
    )


class QbdSolver(object):
    """Stateful solver that remembers the last rate matrix and uses it as the
    initial iterate for the functional iteration on the next call. Used by
    the ODE integrator where consecutive states are close to each other.
    Without diagnostics the solver skips the spectral radius of R and the
    mean-drift cross-check of the recurrence test (see solve_ftsp).
    """
    def __init__(
        self, tol: Optional[float] = DEFAULT_TOL,
        max_iter: Optional[int] = DEFAULT_MAX_ITER,
        method: Optional[str] = DEFAULT_METHOD, warm_start: Optional[bool] = True,
        diagnostics: Optional[bool] = True
    ):
        """Initialize the solver settings.

        Parameters
        ----------
        tol: float, default=1e-13
            Solver tolerance.
        max_iter: int, default=1000000
            Maximum number of iterations.
        method: string, default='logarithmic'
            Solver method.
        warm_start: bool, default=True
            Use the last rate matrix as initial iterate (functional
            iteration only).
        diagnostics: bool, default=True
            Compute solver diagnostics that are not needed for pi_12.
        """
        if method not in METHODS:
            raise ValueError("unknown method '{}'".format(method))
        self.tol = tol
        self.max_iter = max_iter
        self.method = method
        self.warm_start = warm_start
        self.diagnostics = diagnostics
        self._last = None

    def solve(self, blocks: QbdBlocks) -> QbdSolution:
        """Solve the QBD for the given blocks.

        Parameters
        ----------
        blocks: fqrt_fluid.ftsp.qbd.QbdBlocks
            QBD blocks.

        Returns
        -------
        fqrt_fluid.ftsp.qbd.QbdSolution
        """
        initial = None
        if self.warm_start and self._last is not None and self._last.shape == blocks.A0.shape:
            initial = self._last
        solution = solve_rate_matrix(
            blocks,
            tol=self.tol,
            max_iter=self.max_iter,
            method=self.method,
            initial=initial,
            diagnostics=self.diagnostics
        )
        self._last = solution.R
        return solution
