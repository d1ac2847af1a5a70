# This file is part of the FQR-T fluid model toolkit (fqrt-fluid).
#
# Copyright (c) 2021-2022 New York University.
#
# fqrt-fluid is released under the Revised BSD License. See file LICENSE for
# full license details.

"""Unit tests for the registered experiments. The tests use small instances
and few replications. The experiments at desk scale are marked as slow.
"""

import json
import os

import numpy as np
import pandas as pd
import pytest

from fqrt_fluid.error import InvalidParameterError, NotInAError
from fqrt_fluid.harness.config import Thresholds, default_config, load_config
from fqrt_fluid.harness.experiments import (
    ap_check, compare_fwlln, registry, run, run_experiment, ssc_check,
    steady_state_check, time_expansion_check
)
from fqrt_fluid.harness.report import SUMMARY_FILE, TIMINGS_FILE
from fqrt_fluid.model.base import FluidState
from fqrt_fluid.model.core import stationary_point


@pytest.fixture
def cfg(config_file, tmpdir):
    """Small configuration that writes to a temporary directory."""
    return load_config(config_file, output_dir=str(tmpdir.join('out')))


def test_registry():
    """All experiments are registered by name."""
    assert set(registry) == {'fwlln', 'ap', 'expand', 'ssc', 'steady'}
    with pytest.raises(ValueError):
        run_experiment('unknown', default_config())


def test_fwlln(cfg):
    """Test the FWLLN comparison on small instances."""
    report = compare_fwlln(cfg)
    assert report.kind == 'fwlln'
    assert list(report.rows['n']) == [20, 50]
    errors = report.rows['sup_error'].values
    assert np.all(np.isfinite(errors)) and np.all(errors >= 0)
    decreasing = bool(errors[-1] < errors[0])
    assert report.metrics['decreasing'] == decreasing
    assert report.passed == (decreasing and errors[-1] <= 10.0)
    paths = report.details['mean_paths']
    assert len(paths) == 11
    assert list(paths.columns[:4]) == ['t', 'q1', 'q2', 'z12']
    # Both the ODE and the mean paths start at x0.
    assert paths['q1'].values[0] == pytest.approx(0.6)
    assert paths['q1_n50'].values[0] == pytest.approx(0.6)


def test_fwlln_gating(cfg):
    """Overload and initial region are checked before simulating."""
    with pytest.raises(InvalidParameterError) as ex:
        compare_fwlln(cfg.replace(params=cfg.params.replace(lambda1=0.9)))
    assert len(ex.value.violations) == 2
    with pytest.raises(InvalidParameterError):
        compare_fwlln(cfg.replace(x0=FluidState(0.0, 1.0, 0.0)))


def test_ap(cfg):
    """Averaging-principle check with a lenient threshold."""
    cfg = cfg.replace(replications=5, thresholds=Thresholds(ap_levy=1.0))
    report = ap_check(cfg, t_check=0.5)
    assert report.passed
    assert report.metrics['pi_12'] == pytest.approx(report.rows['pi_12'].values[0])
    assert 0 < report.metrics['pi_12'] < 1
    assert np.all(report.rows['levy_distance'] <= 1.0)
    assert any('low sample size' in note for note in report.notes)
    dist = report.details['distributions']
    assert set(dist['source']) == {'ftsp', 'n=20', 'n=50'}
    assert dist[dist['source'] == 'n=20']['mass'].sum() == pytest.approx(1.0)


def test_ap_not_in_a(cfg):
    """The ODE solution has to be in A around the check time."""
    with pytest.raises(NotInAError):
        ap_check(cfg.replace(x0=FluidState(1.0, 0.0, 0.0)), t_check=0.1)


def test_expand(cfg):
    """Time-expanded comparison with the FTSP."""
    cfg = cfg.replace(replications=5, s_step=0.5, thresholds=Thresholds(expand_levy=1.0))
    report = time_expansion_check(cfg, s_horizon=1.0)
    assert report.passed
    assert list(report.rows['n']) == [20, 50]
    # Both processes start at the same initial difference.
    assert list(report.rows['d0']) == [-1.0, -1.0]
    distances = report.details['distances']
    assert list(distances['s']) == [0.0, 0.5, 1.0]
    assert list(distances['levy_n20'])[0] == 0.0
    with pytest.raises(NotInAError):
        time_expansion_check(cfg, gamma_fraction=FluidState(1.0, 0.0, 0.0))


def test_ssc(cfg):
    """State-space collapse metrics are reported for each n."""
    report = ssc_check(cfg.replace(x0=stationary_point(cfg.params)))
    df = report.rows
    assert list(df['n']) == [20, 50]
    assert np.all((df['not_collapsed_fraction'] >= 0) & (df['not_collapsed_fraction'] <= 1))
    assert np.all(df['centred_metric'] >= 0)
    assert report.metrics['window_start'] == 0.0
    assert report.metrics['window_end'] == pytest.approx(1.0)


def test_steady(cfg):
    """Time averages of the six-dimensional state."""
    report = steady_state_check(cfg)
    assert report.metrics['burn_in'] == 1.0
    assert list(report.rows.columns[:7]) == ['n', 'q1', 'q2', 'z11', 'z12', 'z21', 'z22']
    assert np.all(report.rows['deviation'] >= 0)
    assert report.passed
    with pytest.raises(InvalidParameterError):
        steady_state_check(cfg, burn_in=5.0)


def test_steady_burn_in_default(cfg):
    """The default burn-in is a quarter of the (overridden) horizon and an
    explicit burn-in in the configuration takes precedence.
    """
    report = steady_state_check(cfg.replace(n_list=(20,)), T_long=6.0)
    assert report.metrics['T_long'] == 6.0
    assert report.metrics['burn_in'] == 1.5
    assert report.provenance['config']['experiment']['T_long'] == 6.0
    report = steady_state_check(cfg.replace(n_list=(20,), burn_in=0.5))
    assert report.metrics['burn_in'] == 0.5


def test_run(cfg):
    """Running all configured experiments writes reports, summary and
    timings.
    """
    reports = run(cfg)
    assert [r.kind for r in reports] == ['fwlln', 'steady']
    files = set(os.listdir(cfg.output_dir))
    assert {'fwlln.csv', 'fwlln_mean_paths.csv', 'steady.csv', SUMMARY_FILE, TIMINGS_FILE} <= files
    with open(os.path.join(cfg.output_dir, SUMMARY_FILE)) as f:
        doc = json.load(f)
    assert doc['experiments'] == {r.kind: r.passed for r in reports}


def test_determinism(cfg):
    """Reruns with the same configuration give byte-identical reports."""
    run_experiment('steady', cfg)
    filename = os.path.join(cfg.output_dir, 'steady.csv')
    with open(filename, 'rb') as f:
        first = f.read()
    run_experiment('steady', cfg)
    with open(filename, 'rb') as f:
        assert f.read() == first


def test_workers(cfg):
    """Results do not depend on the number of worker processes."""
    r1 = steady_state_check(cfg)
    r2 = steady_state_check(cfg.replace(workers=2))
    pd.testing.assert_frame_equal(r1.rows, r2.rows)


# -- Experiments at desk scale ------------------------------------------------

@pytest.mark.slow
def test_fwlln_acceptance(tmpdir):
    cfg = default_config(output_dir=str(tmpdir)).replace(
        x0=FluidState(0.6, 0.6, 0.0), n_list=(200, 2000), replications=20, T=10.0
    )
    report = compare_fwlln(cfg)
    errors = report.rows['sup_error'].values
    assert errors[1] < errors[0]
    assert errors[1] <= 0.05
    assert report.passed


@pytest.mark.slow
def test_ap_acceptance(tmpdir):
    cfg = default_config(output_dir=str(tmpdir))
    cfg = cfg.replace(x0=stationary_point(cfg.params), n_list=(1000,), replications=5000, workers=4)
    report = ap_check(cfg, t_check=2.0)
    assert report.metrics['levy_distance_max_n'] <= 0.05
    assert report.passed


@pytest.mark.slow
def test_ssc_acceptance(tmpdir):
    cfg = default_config(output_dir=str(tmpdir))
    cfg = cfg.replace(x0=stationary_point(cfg.params), n_list=(200, 2000), replications=20)
    report = ssc_check(cfg)
    assert report.metrics['collapsed_fraction_max_n'] >= 0.999
    uncentred = report.rows['uncentred_metric'].values
    assert uncentred[1] < uncentred[0]
    assert report.passed


@pytest.mark.slow
def test_steady_acceptance(tmpdir):
    cfg = default_config(output_dir=str(tmpdir))
    cfg = cfg.replace(n_list=(1000,), replications=4, T_long=200.0, burn_in=50.0)
    report = steady_state_check(cfg)
    assert report.metrics['deviation_max_n'] <= 0.05
