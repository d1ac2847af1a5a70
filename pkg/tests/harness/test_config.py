# This file is part of the FQR-T fluid model toolkit (fqrt-fluid).
#
# Copyright (c) 2021-2022 New York University.
#
# fqrt-fluid is released under the Revised BSD License. See file LICENSE for
# full license details.

"""Unit tests for loading and validating experiment configurations."""

import math

import pytest

from fqrt_fluid.error import ConfigError
from fqrt_fluid.ftsp.qbd import build_qbd
from fqrt_fluid.harness.config import (
    CANONICAL_PARAMS, ExperimentConfig, apply_overrides, config_from_dict,
    config_to_dict, default_config, load_config
)
from fqrt_fluid.model.base import FluidState


def test_load_config(config_file, params):
    """Test reading a configuration file."""
    cfg = load_config(config_file)
    assert cfg.params == params
    assert cfg.kinds == ('fwlln', 'steady')
    assert cfg.x0 == FluidState(0.6, 0.6, 0.0)
    assert cfg.n_list == (20, 50)
    assert cfg.replications == 2
    assert cfg.seed == 7
    assert cfg.T_long == 4.0
    assert cfg.burn_in_time == 1.0
    assert cfg.thresholds.fwlln_error == 10.0
    # Default values for thresholds and solver settings.
    assert cfg.thresholds.ap_levy == 0.05
    assert cfg.solver.method == 'logarithmic'
    assert math.isnan(cfg.solver.qbd_solver().solve(build_qbd(cfg.x0, cfg.params)).spectral_radius_R)
    assert cfg.workers == 1


def test_overrides(config_file):
    """Seed and output directory from the command line replace the values
    in the file.
    """
    cfg = load_config(config_file, seed=99, output_dir='results')
    assert cfg.seed == 99
    assert cfg.output_dir == 'results'
    cfg = apply_overrides(cfg)
    assert cfg.seed == 99


def test_default_config():
    """The default configuration uses the canonical parameters."""
    cfg = default_config(seed=3)
    assert cfg.params.lambda1 == CANONICAL_PARAMS['lambda1']
    assert cfg.seed == 3
    assert cfg.kinds == ('fwlln',)
    assert cfg.burn_in_time == cfg.T_long / 4


def test_unknown_keys():
    """Unknown keys are reported with their dotted name."""
    doc = {'params': dict(CANONICAL_PARAMS), 'experiment': {'horizon': 10}}
    with pytest.raises(ConfigError) as ex:
        config_from_dict(doc)
    assert ex.value.key == 'experiment.horizon'
    assert 'experiment.horizon' in str(ex.value)
    doc = {'params': dict(CANONICAL_PARAMS, alpha=1.0)}
    with pytest.raises(ConfigError) as ex:
        config_from_dict(doc)
    assert ex.value.key == 'params.alpha'
    with pytest.raises(ConfigError) as ex:
        config_from_dict({'params': dict(CANONICAL_PARAMS), 'plots': {}})
    assert ex.value.key == 'plots'


@pytest.mark.parametrize(
    'experiment',
    [
        {'n_list': [200, 100]},
        {'n_list': []},
        {'x0': [0.1, 0.2]},
        {'kinds': ['fwlln', 'unknown']},
        {'format': 'xml'},
        {'T_long': 10.0, 'burn_in': 10.0},
        {'replications': 0}
    ]
)
def test_invalid_experiment(experiment):
    """Test errors for invalid experiment settings."""
    with pytest.raises(ConfigError):
        config_from_dict({'params': dict(CANONICAL_PARAMS), 'experiment': experiment})


def test_invalid_params():
    """Missing and invalid model parameters."""
    doc = dict(CANONICAL_PARAMS)
    del doc['theta1']
    with pytest.raises(ConfigError):
        config_from_dict({'params': doc})
    with pytest.raises(ConfigError):
        config_from_dict({'params': dict(CANONICAL_PARAMS, lambda1=0)})
    with pytest.raises(ConfigError) as ex:
        config_from_dict({'params': dict(CANONICAL_PARAMS, r12='1/2')})
    assert ex.value.key == 'params'
    with pytest.raises(ConfigError):
        config_from_dict({})


def test_file_errors(tmpdir):
    """Test errors for missing files and invalid TOML."""
    with pytest.raises(ConfigError):
        load_config(str(tmpdir.join('missing.toml')))
    filename = str(tmpdir.join('bad.toml'))
    with open(filename, 'wt') as f:
        f.write('[params\nlambda1 = ')
    with pytest.raises(ConfigError) as ex:
        load_config(filename)
    assert ex.value.path == filename


def test_config_invariants(params):
    """Invariants are also checked when creating configurations directly."""
    with pytest.raises(ConfigError):
        ExperimentConfig(params=params, n_list=(10, 5))
    cfg = ExperimentConfig(params=params, n_list=(10, 10, 20))
    with pytest.raises(ConfigError):
        cfg.replace(replications=0)


def test_config_to_dict(config_file):
    """Serialized configurations can be read again."""
    cfg = load_config(config_file)
    doc = config_to_dict(cfg)
    assert 'burn_in' not in doc['experiment']
    assert doc['experiment']['n_list'] == [20, 50]
    assert doc['params']['r12'] == '1/1'
    assert config_from_dict(doc) == cfg
