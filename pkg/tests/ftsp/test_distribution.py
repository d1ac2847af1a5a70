# This file is part of the FQR-T fluid model toolkit (fqrt-fluid).
#
# Copyright (c) 2021-2022 New York University.
#
# fqrt-fluid is released under the Revised BSD License. See file LICENSE for
# full license details.

"""Unit tests for the stationary distribution of the FTSP and the limiting
probability pi_12.
"""

import numpy as np
import pytest

from fqrt_fluid.error import NotInAError
from fqrt_fluid.ftsp.distribution import (
    balance_pi, ftsp_stationary_distribution, pi_12, solve_ftsp, total_variation,
    truncated_stationary_distribution, zero_atom
)
from fqrt_fluid.ftsp.qbd import QbdSolver
from fqrt_fluid.model.base import FluidState


def test_pi_at_stationary_point(params, xstar):
    """Matrix-geometric, brute-force and closed-form values of pi_12 at the
    stationary point agree.
    """
    pi = pi_12(xstar, params)
    assert pi == pytest.approx(0.186047, abs=1e-6)
    assert pi == pytest.approx(balance_pi(xstar, params), abs=1e-10)
    # z12 is stationary at x*.
    busy12 = params.mu12 * xstar.z12
    busy22 = params.mu22 * (params.m2 - xstar.z12)
    assert pi == pytest.approx(busy12 / (busy12 + busy22), abs=1e-6)
    brute = truncated_stationary_distribution(xstar, params)
    assert abs(brute.positive_mass() - pi) <= 1e-8


def test_pi_bounds_and_continuity(params):
    """pi_12 is strictly between zero and one on random states in A and
    changes little for small moves along the switching surface.
    """
    rng = np.random.default_rng(11)
    for _ in range(200):
        q2 = float(rng.uniform(0.01, 2))
        z12 = float(rng.uniform(0.01, 0.99))
        gamma = FluidState(q2, q2, z12)
        pi = pi_12(gamma, params)
        assert 0 < pi < 1
        dq, dz = rng.uniform(-3e-7, 3e-7, size=2)
        other = FluidState(q2 + dq, q2 + dq, z12 + dz)
        assert abs(pi_12(other, params) - pi) <= 1e-3


@pytest.mark.parametrize('ratio', ['2/1', '3/2', '5/4'])
def test_pi_rational_ratios(params, ratio):
    """pi_12 equals the closed-form balance value for rational ratios."""
    p = params.replace(r12=ratio)
    q2 = 0.3
    gamma = FluidState(p.r * q2, q2, 0.2)
    pi = pi_12(gamma, p)
    assert pi == pytest.approx(balance_pi(gamma, p), abs=1e-9)
    brute = truncated_stationary_distribution(gamma, p)
    assert brute.positive_mass() == pytest.approx(pi, abs=1e-6)


def test_pi_outside_of_a(params):
    """pi_12 is one above and zero below the switching surface."""
    assert pi_12(FluidState(0.5, 0.2, 0.1), params) == 1.0
    assert pi_12(FluidState(0.1, 0.5, 0.1), params) == 0.0
    gamma = FluidState(3.0, 3.0, 0.0)
    assert pi_12(gamma, params.replace(theta1=0.1, theta2=1.0)) == 1.0
    assert pi_12(gamma, params.replace(theta1=1.0, theta2=0.1)) == 0.0


def test_pi_with_shared_solver(params, xstar):
    """A shared (warm-starting) solver gives the same values."""
    solver = QbdSolver()
    for z12 in [0.1, 0.2, 0.3]:
        gamma = FluidState(xstar.q1, xstar.q2, z12)
        assert pi_12(gamma, params, solver=solver) == pytest.approx(pi_12(gamma, params), abs=1e-10)


def test_stationary_distribution(params, xstar):
    """Test the expanded lattice distribution against the brute-force
    solution.
    """
    dist = ftsp_stationary_distribution(xstar, params)
    assert 1.0 - dist.total() < 1e-10
    assert np.all(np.diff(dist.support) > 0)
    assert dist.positive_mass() == pytest.approx(pi_12(xstar, params), abs=1e-9)
    solution = solve_ftsp(xstar, params)
    assert zero_atom(dist) == pytest.approx(solution.zero_mass)
    assert zero_atom(dist) > 0
    brute = truncated_stationary_distribution(xstar, params)
    assert total_variation(dist, brute) < 1e-8
    df = dist.to_frame()
    assert list(df.columns) == ['value', 'mass']
    assert np.array_equal(dist.differences(), dist.support)


def test_stationary_distribution_lattice(params):
    """Lattice values are in units of 1/k of the queue difference."""
    p = params.replace(r12='3/2')
    gamma = FluidState(1.5 * 0.3, 0.3, 0.2)
    dist = ftsp_stationary_distribution(gamma, p)
    assert dist.k == 2
    assert np.allclose(dist.differences(), dist.support / 2)
    assert dist.total() == pytest.approx(1.0, abs=1e-9)


def test_not_in_a(params):
    """Test errors for states outside of A."""
    with pytest.raises(NotInAError):
        ftsp_stationary_distribution(FluidState(0.5, 0.2, 0.1), params)
    gamma = FluidState(3.0, 3.0, 0.0)
    p = params.replace(theta1=0.1, theta2=1.0)
    with pytest.raises(NotInAError):
        balance_pi(gamma, p)
    with pytest.raises(NotInAError):
        solve_ftsp(gamma, p)


def test_total_variation(params, xstar):
    """Total variation distance of a distribution to itself is zero."""
    dist = ftsp_stationary_distribution(xstar, params)
    assert total_variation(dist, dist) == 0
