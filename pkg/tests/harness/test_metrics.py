# This file is part of the FQR-T fluid model toolkit (fqrt-fluid).
#
# Copyright (c) 2021-2022 New York University.
#
# fqrt-fluid is released under the Revised BSD License. See file LICENSE for
# full license details.

"""Unit tests for distribution functions and the Levy distance."""

import numpy as np
import pytest

from fqrt_fluid.ftsp.distribution import FtspDistribution, ftsp_stationary_distribution
from fqrt_fluid.harness.metrics import (
    StepCdf, cdf_from_distribution, empirical_cdf, levy_distance
)


def test_empirical_cdf():
    """The empirical distribution function is right-continuous."""
    F = empirical_cdf(np.array([1.0, 0.0, 1.0, 2.0]))
    assert list(F.points) == [0.0, 1.0, 2.0]
    assert list(F(np.array([-1.0, 0.0, 0.5, 1.0, 2.0, 3.0]))) == [0.0, 0.25, 0.25, 0.75, 1.0, 1.0]
    assert F.upper == 1.0
    with pytest.raises(ValueError):
        empirical_cdf(np.array([]))


def test_cdf_from_distribution(params, xstar):
    """Lattice values are mapped to the queue-difference scale."""
    dist = FtspDistribution(support=np.array([-1, 0, 3]), mass=np.array([0.25, 0.5, 0.25]), k=2)
    F = cdf_from_distribution(dist)
    assert list(F.points) == [-0.5, 0.0, 1.5]
    assert list(F(np.array([-1.0, -0.5, 1.0, 1.5]))) == [0.0, 0.25, 0.75, 1.0]
    F = cdf_from_distribution(ftsp_stationary_distribution(xstar, params))
    assert F(np.array([0.0]))[0] == pytest.approx(1.0 - 0.186047, abs=1e-6)


def test_levy_distance_point_masses():
    """Levy distance between point masses is the minimum of the distance of
    the points and one.
    """
    F0 = empirical_cdf(np.array([0.0]))
    assert levy_distance(F0, F0) == 0.0
    F1 = empirical_cdf(np.array([0.3]))
    assert levy_distance(F0, F1) == pytest.approx(0.3, abs=1e-12)
    assert levy_distance(F1, F0) == pytest.approx(0.3, abs=1e-12)
    F2 = empirical_cdf(np.array([2.0]))
    assert levy_distance(F0, F2) == pytest.approx(1.0, abs=1e-12)


def test_levy_distance_vertical():
    """Distance between distributions on the same support is bounded by the
    maximal difference of the distribution functions.
    """
    F1 = empirical_cdf(np.array([0.0, 0.0, 0.0, 5.0]))
    F2 = empirical_cdf(np.array([0.0, 5.0, 5.0, 5.0]))
    d = levy_distance(F1, F2)
    assert 0 < d <= 0.5 + 1e-12
    assert levy_distance(F2, F1) == pytest.approx(d, abs=1e-12)


def test_levy_distance_defective():
    """Mass missing at infinity counts in the tail limits."""
    F1 = StepCdf(points=np.array([0.0]), cumulative=np.array([0.9]))
    F2 = empirical_cdf(np.array([0.0]))
    assert levy_distance(F1, F2) == pytest.approx(0.1, abs=1e-12)
