# This file is part of the FQR-T fluid model toolkit (fqrt-fluid).
#
# Copyright (c) 2021-2022 New York University.
#
# fqrt-fluid is released under the Revised BSD License. See file LICENSE for
# full license details.

"""Unit tests for the QBD representation of the FTSP and the rate-matrix
solvers.
"""

import math

import numpy as np
import pytest

from fqrt_fluid.error import NonConvergenceError
from fqrt_fluid.ftsp.qbd import (
    QbdSolver, build_blocks, build_qbd, lattice_index, lattice_value,
    mean_drift_test, qbd_positive_recurrent, rate_matrix_residual,
    solve_rate_matrix
)
from fqrt_fluid.model.base import FluidState, Region
from fqrt_fluid.model.core import classify_region, drift_pair


@pytest.mark.parametrize('m', [1, 2, 3])
def test_lattice_indexing(m):
    """Lattice values and (level, phase) pairs are inverse mappings."""
    for value in range(-20, 21):
        level, phase = lattice_index(value, m)
        assert 0 <= phase < 2 * m
        assert lattice_value(level, phase, m) == value


@pytest.mark.parametrize('ratio', ['1/1', '2/1', '3/2', '5/3'])
def test_generator_rows(params, xstar, ratio):
    """Rows of the level generator sum to zero."""
    p = params.replace(r12=ratio)
    blocks = build_qbd(xstar, p)
    j, k = p.r12.numerator, p.r12.denominator
    assert blocks.m == max(j, k)
    assert blocks.phases == 2 * blocks.m
    inner = blocks.A0 + blocks.A1 + blocks.A2
    assert np.allclose(inner.sum(axis=1), 0)
    assert np.allclose((blocks.B + blocks.A0).sum(axis=1), 0)


def test_positive_recurrence_at_stationary_point(params, xstar):
    """The closed-form drift criterion and the mean-drift test agree."""
    blocks = build_qbd(xstar, params)
    result, flows = mean_drift_test(blocks)
    assert result
    assert len(flows) == 2
    assert qbd_positive_recurrent(blocks, xstar, params)


def test_not_positive_recurrent(params):
    """The FTSP in A+ is not positive recurrent."""
    gamma = FluidState(3.0, 3.0, 0.0)
    p = params.replace(theta1=0.1, theta2=1.0)
    blocks = build_qbd(gamma, p)
    assert not mean_drift_test(blocks)[0]
    assert not qbd_positive_recurrent(blocks, gamma, p)


@pytest.mark.parametrize('method', ['functional', 'logarithmic'])
def test_rate_matrix_solution(params, xstar, method):
    """Test residual, spectral radius and boundary vector of the solution."""
    blocks = build_qbd(xstar, params)
    solution = solve_rate_matrix(blocks, method=method)
    assert solution.method == method
    assert solution.residual <= 1e-12
    assert rate_matrix_residual(blocks, solution.R) <= 1e-12
    assert solution.spectral_radius_R < 1
    assert np.all(solution.R >= 0)
    # Total mass over all levels is one.
    total = solution.alpha0 @ np.linalg.solve(np.eye(2) - solution.R, np.ones(2))
    assert total == pytest.approx(1.0)
    assert solution.level_probabilities(0) == pytest.approx(solution.alpha0)


def test_solver_methods_agree(params, xstar):
    """Functional iteration and logarithmic reduction give the same result."""
    p = params.replace(r12='3/2')
    blocks = build_qbd(xstar._replace(q1=1.5 * xstar.q2), p)
    s1 = solve_rate_matrix(blocks, method='functional')
    s2 = solve_rate_matrix(blocks, method='logarithmic')
    assert np.allclose(s1.R, s2.R, atol=1e-10)
    assert s1.pi_positive == pytest.approx(s2.pi_positive, abs=1e-10)


def test_solver_errors(params, xstar):
    """Test errors for unknown methods and for hitting the iteration cap."""
    blocks = build_qbd(xstar, params)
    with pytest.raises(ValueError):
        solve_rate_matrix(blocks, method='unknown')
    with pytest.raises(ValueError):
        QbdSolver(method='unknown')
    with pytest.raises(NonConvergenceError) as ex:
        solve_rate_matrix(blocks, max_iter=1, method='functional')
    assert ex.value.iterations == 1
    assert ex.value.residual > 0


def test_warm_start(params, xstar):
    """A warm-started solver needs fewer iterations for a nearby state."""
    solver = QbdSolver(method='functional')
    first = solver.solve(build_qbd(xstar, params))
    gamma = FluidState(xstar.q1 + 1e-4, xstar.q2 + 1e-4, xstar.z12)
    second = solver.solve(build_qbd(gamma, params))
    assert second.iterations < first.iterations
    cold = QbdSolver(method='functional', warm_start=False).solve(build_qbd(gamma, params))
    assert second.pi_positive == pytest.approx(cold.pi_positive, abs=1e-10)


def test_random_states_in_a(params):
    """Residual and spectral radius on random states in A, and agreement of
    the two positive recurrence tests.
    """
    rng = np.random.default_rng(42)
    count = 0
    for ratio in ['1/1', '3/2']:
        p = params.replace(r12=ratio, theta1=float(rng.uniform(0.2, 1.0)))
        r = p.r
        while count < 100 * (1 + (ratio != '1/1')):
            q2 = float(rng.uniform(0, 2))
            gamma = FluidState(r * q2, q2, float(rng.uniform(0, p.m2)))
            blocks = build_qbd(gamma, p)
            delta_minus, delta_plus = drift_pair(gamma, p)
            recurrent = qbd_positive_recurrent(blocks, gamma, p)
            assert recurrent == (classify_region(gamma, p) == Region.BOUNDARY_A)
            if not recurrent:
                continue
            solution = solve_rate_matrix(blocks, method='logarithmic')
            assert solution.residual <= 1e-12
            assert solution.spectral_radius_R < 1
            count += 1


@pytest.mark.parametrize('method', ['functional', 'logarithmic'])
@pytest.mark.parametrize('c', [0.25, 7.0, 1000.0])
def test_rate_scaling(params, xstar, method, c):
    """Multiplying all FTSP rates by a constant does not change the rate
    matrix or the stationary probability of the positive side.
    """
    blocks = build_qbd(xstar, params)
    scaled = build_blocks(blocks.rates.scale(c), (blocks.j, blocks.k))
    assert np.allclose(scaled.A1, c * blocks.A1)
    s1 = solve_rate_matrix(blocks, method=method)
    s2 = solve_rate_matrix(scaled, method=method)
    assert np.allclose(s1.R, s2.R, atol=1e-10)
    assert abs(s1.pi_positive - s2.pi_positive) <= 1e-10


def test_block_sparsity(params):
    """Nonzero pattern of the positive-side blocks for r = 2/3. Up-jumps by
    +3 stay in the phase, +2 moves one phase down and the other way round
    for the down-blocks. The within-level block links the first and last
    positive phase.
    """
    p = params.replace(r12='2/3', r21='2/3')
    gamma = FluidState(2 / 3 * 0.3, 0.3, 0.2)
    blocks = build_qbd(gamma, p)
    assert (blocks.j, blocks.k, blocks.m) == (2, 3, 3)
    pos = blocks.positive_phases()
    assert list(pos) == [True, True, True, False, False, False]
    idx = np.ix_(pos, pos)
    eye = np.eye(3, dtype=bool)
    lower = np.zeros((3, 3), dtype=bool)
    lower[1, 0] = lower[2, 1] = True
    within = np.zeros((3, 3), dtype=bool)
    within[0, 2] = within[2, 0] = True
    assert np.array_equal(blocks.A0[idx] != 0, eye | lower)
    assert np.array_equal(blocks.A2[idx] != 0, eye | lower.T)
    assert np.array_equal(blocks.A1[idx] != 0, eye | within)
    rates = blocks.rates
    assert blocks.A0[1, 0] == pytest.approx(rates.lamR_plus)
    assert blocks.A2[0, 1] == pytest.approx(rates.muR_plus)
    assert blocks.A1[0, 2] == pytest.approx(rates.lamR_plus)
    assert blocks.A1[2, 0] == pytest.approx(rates.muR_plus)


def test_solver_without_diagnostics(params, xstar):
    """Skipping the diagnostics leaves the solution unchanged."""
    blocks = build_qbd(xstar, params)
    plain = QbdSolver(diagnostics=False).solve(blocks)
    full = QbdSolver().solve(blocks)
    assert plain.method == 'logarithmic'
    assert math.isnan(plain.spectral_radius_R)
    assert full.spectral_radius_R < 1
    assert plain.pi_positive == pytest.approx(full.pi_positive, abs=1e-14)
