# This file is part of the FQR-T fluid model toolkit (fqrt-fluid).
#
# Copyright (c) 2021-2022 New York University.
#
# fqrt-fluid is released under the Revised BSD License. See file LICENSE for
# full license details.

"""General fixtures for unit tests."""

from fractions import Fraction

import pytest

from fqrt_fluid.model.base import ModelParams
from fqrt_fluid.model.core import scaled_instance, stationary_point


def pytest_addoption(parser):
    parser.addoption(
        '--runslow', action='store_true', default=False, help='run long-running experiments'
    )


def pytest_configure(config):
    config.addinivalue_line('markers', 'slow: long-running acceptance experiment')


def pytest_collection_modifyitems(config, items):
    if config.getoption('--runslow'):
        return
    skip_slow = pytest.mark.skip(reason='need --runslow option to run')
    for item in items:
        if 'slow' in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def params():
    """Parameters of the canonical X-model instance."""
    return ModelParams(
        lambda1=1.3,
        lambda2=0.9,
        mu11=1.0,
        mu12=0.8,
        mu21=0.8,
        mu22=1.0,
        theta1=0.5,
        theta2=0.5,
        m1=1.0,
        m2=1.0,
        r12=Fraction(1),
        r21=Fraction(1),
        kappa12=0.1,
        kappa21=0.1
    )


@pytest.fixture
def xstar(params):
    """Stationary point of the canonical instance."""
    return stationary_point(params)


@pytest.fixture
def instance(params):
    """Small scaled instance (n = 50)."""
    return scaled_instance(params, 50)


@pytest.fixture
def config_file(tmpdir):
    """Write a small configuration file and return its path."""
    filename = str(tmpdir.join('config.toml'))
    with open(filename, 'wt') as f:
        f.write(CONFIG)
    return filename


CONFIG = '''[params]
lambda1 = 1.3
lambda2 = 0.9
mu11 = 1.0
mu12 = 0.8
mu21 = 0.8
mu22 = 1.0
theta1 = 0.5
theta2 = 0.5
m1 = 1.0
m2 = 1.0
r12 = "1/1"
r21 = [1, 1]
kappa12 = 0.1
kappa21 = 0.1

[experiment]
kinds = ["fwlln", "steady"]
x0 = [0.6, 0.6, 0.0]
n_list = [20, 50]
replications = 2
T = 1.0
h = 0.01
seed = 7
dt_sample = 0.1
T_long = 4.0

[thresholds]
fwlln_error = 10.0
steady_deviation = 10.0
'''
