# This file is part of the FQR-T fluid model toolkit (fqrt-fluid).
#
# Copyright (c) 2021-2022 New York University.
#
# fqrt-fluid is released under the Revised BSD License. See file LICENSE for
# full license details.

"""Unit tests for the FTSP simulator and the frozen queue-difference
process.
"""

import numpy as np
import pytest

from fqrt_fluid.ctmc.state import SystemState
from fqrt_fluid.ftsp.distribution import pi_12
from fqrt_fluid.ftsp.frozen import frozen_as_ftsp, frozen_drift_pair, frozen_params
from fqrt_fluid.ftsp.simulate import FtspPath, simulate_ftsp
from fqrt_fluid.model.core import drift_pair


def test_path_evaluation():
    """Paths are right-continuous step functions."""
    path = FtspPath(
        times=np.array([0.0, 1.0, 2.5]),
        values=np.array([0, 1, -1]),
        horizon=4.0,
        k=1
    )
    assert list(path.value_at(np.array([0.0, 0.5, 1.0, 2.4, 2.5, 4.0]))) == [0, 0, 1, 1, -1, -1]
    assert path.occupancy_positive() == pytest.approx(1.5 / 4.0)
    assert path.occupancy_positive(2.0) == pytest.approx(0.5)
    assert list(path.to_frame().columns) == ['t', 'value']


def test_simulation_is_deterministic(params, xstar):
    """Same seed gives the same path."""
    p1 = simulate_ftsp(xstar, params, 0, 50.0, seed=3)
    p2 = simulate_ftsp(xstar, params, 0, 50.0, seed=3)
    assert np.array_equal(p1.times, p2.times)
    assert np.array_equal(p1.values, p2.values)
    p3 = simulate_ftsp(xstar, params, 0, 50.0, seed=4)
    assert not np.array_equal(p3.values, p1.values)
    assert np.all(np.abs(np.diff(p1.values)) == 1)


def test_event_cap(params, xstar):
    """The number of events can be bounded."""
    path = simulate_ftsp(xstar, params, 5, 1000.0, seed=1, max_events=10)
    assert len(path.times) == 11
    assert path.values[0] == 5


def test_occupancy_matches_pi(params, xstar):
    """Long-run fraction of time with a positive value approximates pi_12."""
    path = simulate_ftsp(xstar, params, 0, 20000.0, seed=11)
    mean, stderr = path.occupancy_batches(20)
    assert stderr > 0
    assert abs(mean - pi_12(xstar, params)) < 3 * stderr
    assert path.occupancy_positive() == pytest.approx(mean, abs=1e-9)


def test_frozen_process(params, instance):
    """The frozen drift rates equal n times the FTSP drift rates of the
    frozen parameters at Gamma / n.
    """
    Gamma = SystemState(Q1=12, Q2=12, Z11=50, Z12=11, Z21=0, Z22=39)
    gamma, scale = frozen_as_ftsp(instance, Gamma)
    assert scale == 50
    assert gamma.q1 == pytest.approx(12 / 50)
    fp = frozen_params(instance)
    assert fp.lambda1 == instance.lambda1_n / 50
    expected = drift_pair(gamma, fp)
    delta_minus, delta_plus = frozen_drift_pair(instance, Gamma)
    assert delta_minus == pytest.approx(50 * expected[0])
    assert delta_plus == pytest.approx(50 * expected[1])
