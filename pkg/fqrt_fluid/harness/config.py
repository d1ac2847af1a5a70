# This file is part of the FQR-T fluid model toolkit (fqrt-fluid).
#
# Copyright (c) 2021-2022 New York University.
#
# fqrt-fluid is released under the Revised BSD License. See file LICENSE for
# full license details.

"""Experiment configuration. Configurations are TOML documents with the
tables [params], [experiment], [thresholds] and [solver]. The parsed
document is validated against the Json Schema in `schema.json` before it is
converted into an ExperimentConfig object. Only the [params] table is
required; all other values have defaults that reproduce the canonical
experiment setup.
"""

from __future__ import annotations
from dataclasses import dataclass, field, fields, replace
from jsonschema import Draft7Validator, RefResolver
from typing import Any, Dict, List, Optional, Tuple

import importlib.resources as pkg_resources
import json
import os

import toml

from fqrt_fluid.error import ConfigError, InvalidParameterError
from fqrt_fluid.ftsp.qbd import DEFAULT_MAX_ITER, DEFAULT_METHOD, DEFAULT_TOL, QbdSolver
from fqrt_fluid.ftsp.distribution import DEFAULT_TAIL_EPSILON
from fqrt_fluid.fluid.ode import DEFAULT_BOUNDARY_TOL, DEFAULT_STEP
from fqrt_fluid.ctmc.simulate import DEFAULT_DT_SAMPLE
from fqrt_fluid.model.base import FluidState, ModelParams, params_from_dict, params_to_dict


"""Create schema validator for configuration documents."""
schemafile = 'file:///{}'.format(os.path.abspath(os.path.join(__file__, 'schema.json')))
schema = json.load(pkg_resources.open_text(__package__, 'schema.json'))
resolver = RefResolver(schemafile, schema)
validator = Draft7Validator(schema=schema['definitions']['config'], resolver=resolver)


"""Parameters of the canonical X-model instance."""
CANONICAL_PARAMS = {
    'lambda1': 1.3,
    'lambda2': 0.9,
    'mu11': 1.0,
    'mu12': 0.8,
    'mu21': 0.8,
    'mu22': 1.0,
    'theta1': 0.5,
    'theta2': 0.5,
    'm1': 1.0,
    'm2': 1.0,
    'r12': '1/1',
    'r21': '1/1',
    'kappa12': 0.1,
    'kappa21': 0.1
}

"""Default values for the [experiment] table."""
DEFAULT_KINDS = ['fwlln']
DEFAULT_X0 = (0.6, 0.6, 0.0)
DEFAULT_N_LIST = [200, 2000]
DEFAULT_REPLICATIONS = 20
DEFAULT_HORIZON = 10.0
DEFAULT_SEED = 0
DEFAULT_OUTPUT_DIR = 'out'
DEFAULT_FORMAT = 'csv'
DEFAULT_T_CHECK = 2.0
DEFAULT_S_HORIZON = 5.0
DEFAULT_S_STEP = 0.1
DEFAULT_T_LONG = 200.0


@dataclass(frozen=True)
class SolverConfig:
    """Settings for the QBD solver and the ODE integrator."""
    tol: float = DEFAULT_TOL
    max_iter: int = DEFAULT_MAX_ITER
    method: str = DEFAULT_METHOD
    tail_epsilon: float = DEFAULT_TAIL_EPSILON
    boundary_tol: float = DEFAULT_BOUNDARY_TOL

    def qbd_solver(self, diagnostics: Optional[bool] = False) -> QbdSolver:
        """Get a new (warm-starting) QBD solver with these settings. The
        integrator does not read the solver diagnostics, so they are off by
        default.
        """
        return QbdSolver(
            tol=self.tol, max_iter=self.max_iter, method=self.method,
            diagnostics=diagnostics
        )


@dataclass(frozen=True)
class Thresholds:
    """Pass/fail thresholds of the experiments."""
    fwlln_error: float = 0.05
    ap_levy: float = 0.05
    expand_levy: float = 0.1
    ssc_fraction: float = 0.999
    steady_deviation: float = 0.05


@dataclass(frozen=True)
class ExperimentConfig:
    """Complete configuration of an experiment run. The burn-in period of the
    steady-state check defaults to a quarter of T_long.
    """
    params: ModelParams
    x0: FluidState = FluidState(*DEFAULT_X0)
    n_list: Tuple[int, ...] = tuple(DEFAULT_N_LIST)
    replications: int = DEFAULT_REPLICATIONS
    T: float = DEFAULT_HORIZON
    h: float = DEFAULT_STEP
    seed: int = DEFAULT_SEED
    dt_sample: float = DEFAULT_DT_SAMPLE
    output_dir: str = DEFAULT_OUTPUT_DIR
    kinds: Tuple[str, ...] = tuple(DEFAULT_KINDS)
    format: str = DEFAULT_FORMAT
    workers: int = 1
    t_check: float = DEFAULT_T_CHECK
    s_horizon: float = DEFAULT_S_HORIZON
    s_step: float = DEFAULT_S_STEP
    T_long: float = DEFAULT_T_LONG
    burn_in: Optional[float] = None
    thresholds: Thresholds = field(default_factory=Thresholds)
    solver: SolverConfig = field(default_factory=SolverConfig)

    def __post_init__(self):
        """Validate the invariants that the schema cannot express.

        Raises
        ------
        fqrt_fluid.error.ConfigError
        """
        if not self.n_list:
            raise ConfigError('n_list must not be empty', key='experiment.n_list')
        if list(self.n_list) != sorted(self.n_list):
            raise ConfigError('n_list must be ascending', key='experiment.n_list')
        if self.replications < 1:
            raise ConfigError('replications must be positive', key='experiment.replications')
        if self.burn_in is not None and self.burn_in >= self.T_long:
            raise ConfigError('burn_in must be less than T_long', key='experiment.burn_in')

    @property
    def burn_in_time(self) -> float:
        return self.burn_in if self.burn_in is not None else self.T_long / 4.0

    def replace(self, **kwargs) -> ExperimentConfig:
        """Get a modified copy of the configuration."""
        return replace(self, **kwargs)


# -- Loading ------------------------------------------------------------------

def _schema_errors(doc: Dict) -> List[Tuple[str, str]]:
    """Get (dotted key, message) pairs for all schema violations."""
    result = list()
    for error in sorted(validator.iter_errors(doc), key=lambda e: [str(p) for p in e.absolute_path]):
        path = [str(p) for p in error.absolute_path]
        if error.validator == 'additionalProperties':
            known = error.schema.get('properties', {})
            for key in sorted(set(error.instance) - set(known)):
                result.append(('.'.join(path + [key]), "unknown key '{}'".format(key)))
        else:
            key = '.'.join(path) if path else None
            result.append((key, error.message))
    return result


def config_from_dict(doc: Dict[str, Any], path: Optional[str] = None) -> ExperimentConfig:
    """Create an experiment configuration from a parsed configuration
    document.

    Parameters
    ----------
    doc: dict
        Parsed TOML document.
    path: string, default=None
        Path of the source file (for error messages).

    Returns
    -------
    fqrt_fluid.harness.config.ExperimentConfig

    Raises
    ------
    fqrt_fluid.error.ConfigError
    """
    errors = _schema_errors(doc)
    if errors:
        key, message = errors[0]
        if key is not None:
            message = '{}: {}'.format(key, message)
        raise ConfigError(message, key=key, path=path)
    try:
        params = params_from_dict(doc['params'])
    except InvalidParameterError as ex:
        raise ConfigError(ex.message, key='params', path=path)
    args = dict(doc.get('experiment', {}))
    if 'x0' in args:
        args['x0'] = FluidState(*[float(v) for v in args['x0']])
    for key in ['n_list', 'kinds']:
        if key in args:
            args[key] = tuple(args[key])
    try:
        return ExperimentConfig(
            params=params,
            thresholds=Thresholds(**doc.get('thresholds', {})),
            solver=SolverConfig(**doc.get('solver', {})),
            **args
        )
    except ConfigError as ex:
        raise ConfigError(ex.message, key=ex.key, path=path)


def load_config(
    path: str, seed: Optional[int] = None, output_dir: Optional[str] = None
) -> ExperimentConfig:
    """Read an experiment configuration from a TOML file. The optional seed
    and output directory override the values in the file.

    Parameters
    ----------
    path: string
        Path to the configuration file.
    seed: int, default=None
        Master seed override.
    output_dir: string, default=None
        Output directory override.

    Returns
    -------
    fqrt_fluid.harness.config.ExperimentConfig

    Raises
    ------
    fqrt_fluid.error.ConfigError
    """
    try:
        doc = toml.load(path)
    except toml.TomlDecodeError as ex:
        raise ConfigError('invalid TOML: {}'.format(ex), path=path)
    except OSError as ex:
        raise ConfigError('cannot read file: {}'.format(ex.strerror), path=path)
    return apply_overrides(config_from_dict(doc, path=path), seed=seed, output_dir=output_dir)


def default_config(seed: Optional[int] = None, output_dir: Optional[str] = None) -> ExperimentConfig:
    """Configuration with the canonical parameters and default settings."""
    cfg = config_from_dict({'params': dict(CANONICAL_PARAMS)})
    return apply_overrides(cfg, seed=seed, output_dir=output_dir)


def apply_overrides(
    cfg: ExperimentConfig, seed: Optional[int] = None, output_dir: Optional[str] = None
) -> ExperimentConfig:
    """Replace seed and output directory if override values are given."""
    if seed is not None:
        cfg = cfg.replace(seed=seed)
    if output_dir is not None:
        cfg = cfg.replace(output_dir=output_dir)
    return cfg


def config_to_dict(cfg: ExperimentConfig) -> Dict[str, Any]:
    """Serialization of a configuration as a (TOML compatible) dictionary.
    Used for provenance records in reports.
    """
    experiment = dict()
    for f in fields(cfg):
        if f.name in ['params', 'thresholds', 'solver']:
            continue
        value = getattr(cfg, f.name)
        if value is None:
            continue
        experiment[f.name] = list(value) if isinstance(value, tuple) else value
    return {
        'params': params_to_dict(cfg.params),
        'experiment': experiment,
        'thresholds': {f.name: getattr(cfg.thresholds, f.name) for f in fields(cfg.thresholds)},
        'solver': {f.name: getattr(cfg.solver, f.name) for f in fields(cfg.solver)}
    }
