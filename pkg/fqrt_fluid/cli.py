# This file is part of the FQR-T fluid model toolkit (fqrt-fluid).
#
# Copyright (c) 2021-2022 New York University.
#
# fqrt-fluid is released under the Revised BSD License. See file LICENSE for
# full license details.

"""Command-line interface. Subcommands either evaluate the fluid model
(fluid, stationary, ftsp-pi), simulate a single sample path (simulate), run
one of the registered experiments (fwlln, ap, ssc, steady, expand), or run
all experiments of a configuration file (run).

The exit status is 0 on success (and if all checks pass), 1 if a check
fails, and 2 on errors.
"""

from typing import List, Optional

import argparse
import logging
import os
import sys

from fqrt_fluid.ctmc.simulate import scale_path, simulate
from fqrt_fluid.ctmc.state import initial_state
from fqrt_fluid.error import FqrtError
from fqrt_fluid.fluid.ode import integrate, ode_rhs
from fqrt_fluid.ftsp.distribution import ftsp_stationary_distribution, pi_12
from fqrt_fluid.harness.config import ExperimentConfig, default_config, load_config
from fqrt_fluid.harness.experiments import registry, run, run_experiment, provenance
from fqrt_fluid.harness.report import dumps, write_frame
from fqrt_fluid.model.base import FluidState, Region, params_to_dict
from fqrt_fluid.model.core import (
    classify_region, derived_quantities, drift_pair, scaled_instance,
    stationary_point, stationary_point_6, validate_overload
)
from fqrt_fluid.rng import STREAM_SIMULATE, replication_seed
from fqrt_fluid.version import __version__


logger = logging.getLogger(__name__)


"""Exit codes."""
EXIT_OK = 0
EXIT_FAILED = 1
EXIT_ERROR = 2


def parse_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    """Parse command-line arguments."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', default=None, help='Path to TOML configuration file')
    common.add_argument('--seed', type=int, default=None, help='Master seed')
    common.add_argument('--out', default=None, help='Output directory')
    common.add_argument('--format', choices=['csv', 'json'], default=None, help='Output format')
    common.add_argument(
        '-v', '--verbose', action='count', default=0,
        help='Increase verbosity (-v: INFO, -vv: DEBUG)'
    )
    parser = argparse.ArgumentParser(
        prog='fqrt',
        description='Fluid model of the X-model under FQR-T control.'
    )
    parser.add_argument('--version', action='version', version=__version__)
    sub = parser.add_subparsers(dest='command')
    sub.required = True
    cmd = sub.add_parser('fluid', parents=[common], help='Integrate the fluid ODE')
    cmd.add_argument('--x0', type=float, nargs=3, default=None, metavar=('Q1', 'Q2', 'Z12'))
    cmd.add_argument('--T', type=float, default=None, help='Horizon')
    cmd.add_argument('--h', type=float, default=None, help='Step size')
    sub.add_parser('stationary', parents=[common], help='Stationary point and drift rates')
    cmd = sub.add_parser('ftsp-pi', parents=[common], help='FTSP at a fluid state')
    cmd.add_argument('--state', type=float, nargs=3, default=None, metavar=('Q1', 'Q2', 'Z12'))
    cmd = sub.add_parser('simulate', parents=[common], help='Simulate one sample path')
    cmd.add_argument('--n', type=int, default=None, help='Scale index')
    cmd.add_argument('--T', type=float, default=None, help='Horizon')
    for kind in sorted(registry):
        sub.add_parser(kind, parents=[common], help='Run the {} experiment'.format(kind))
    sub.add_parser('run', parents=[common], help='Run all configured experiments')
    return parser.parse_args(argv)


def get_config(args: argparse.Namespace) -> ExperimentConfig:
    """Load the configuration file (or the canonical default) and apply the
    command-line overrides.
    """
    if args.config is not None:
        cfg = load_config(args.config, seed=args.seed, output_dir=args.out)
    else:
        cfg = default_config(seed=args.seed, output_dir=args.out)
    if args.format is not None:
        cfg = cfg.replace(format=args.format)
    return cfg


def _output(cfg: ExperimentConfig, name: str) -> str:
    os.makedirs(cfg.output_dir, exist_ok=True)
    return os.path.join(cfg.output_dir, '{}.{}'.format(name, cfg.format))


# -- Commands -----------------------------------------------------------------

def cmd_fluid(cfg: ExperimentConfig, args: argparse.Namespace) -> int:
    x0 = FluidState(*args.x0) if args.x0 is not None else cfg.x0
    T = args.T if args.T is not None else cfg.T
    h = args.h if args.h is not None else cfg.h
    traj = integrate(x0, cfg.params, T, h=h, solver=cfg.solver.qbd_solver(), atol=cfg.solver.boundary_tol)
    meta = dict(provenance(cfg))
    path = write_frame(traj.to_frame(), _output(cfg, 'fluid'), fmt=cfg.format, provenance=meta)
    x = stationary_point(cfg.params)
    final = traj.final()
    print(dumps({
        'file': path,
        'final': list(final),
        'distance_to_stationary': float(traj.distance_to(x)[-1])
    }))
    return EXIT_OK


def cmd_stationary(cfg: ExperimentConfig, args: argparse.Namespace) -> int:
    p = cfg.params
    x = stationary_point(p)
    delta_minus, delta_plus = drift_pair(x, p)
    print(dumps({
        'params': params_to_dict(p),
        'derived': derived_quantities(p)._asdict(),
        'overload_violations': validate_overload(p),
        'x_star': x._asdict(),
        'x_star_6': list(stationary_point_6(p)),
        'delta_minus': delta_minus,
        'delta_plus': delta_plus,
        'region': classify_region(x, p).label,
        'pi_12': pi_12(x, p),
        'rhs': list(ode_rhs(x, p))
    }))
    return EXIT_OK


def cmd_ftsp_pi(cfg: ExperimentConfig, args: argparse.Namespace) -> int:
    p = cfg.params
    gamma = FluidState(*args.state) if args.state is not None else stationary_point(p)
    region = classify_region(gamma, p, atol=cfg.solver.boundary_tol)
    delta_minus, delta_plus = drift_pair(gamma, p)
    doc = {
        'state': list(gamma),
        'region': region.label,
        'delta_minus': delta_minus,
        'delta_plus': delta_plus,
        'pi_12': pi_12(
            gamma, p, solver=cfg.solver.qbd_solver(diagnostics=True), atol=cfg.solver.boundary_tol
        )
    }
    if region == Region.BOUNDARY_A:
        dist = ftsp_stationary_distribution(
            gamma, p, tail_epsilon=cfg.solver.tail_epsilon, atol=cfg.solver.boundary_tol
        )
        df = dist.to_frame()
        df['difference'] = dist.differences()
        meta = dict(provenance(cfg))
        meta['state'] = list(gamma)
        doc['file'] = write_frame(df, _output(cfg, 'ftsp_distribution'), fmt=cfg.format, provenance=meta)
    print(dumps(doc))
    return EXIT_OK


def cmd_simulate(cfg: ExperimentConfig, args: argparse.Namespace) -> int:
    n = args.n if args.n is not None else cfg.n_list[-1]
    T = args.T if args.T is not None else cfg.T
    inst = scaled_instance(cfg.params, n)
    seed = replication_seed(cfg.seed, STREAM_SIMULATE, n, 0)
    path = simulate(inst, initial_state(inst, cfg.x0), T, seed, dt_sample=cfg.dt_sample)
    df = path.to_frame()
    scaled = scale_path(path, n).to_frame()
    for col in ['q1', 'q2', 'z12']:
        df[col] = scaled[col]
    meta = dict(provenance(cfg))
    meta['n'] = n
    file = write_frame(df, _output(cfg, 'simulate'), fmt=cfg.format, provenance=meta)
    print(dumps({'file': file, 'n': n, 'events': path.events, 'counters': path.counters}))
    return EXIT_OK


def cmd_experiment(cfg: ExperimentConfig, kind: str) -> int:
    report = run_experiment(kind, cfg)
    print(dumps({'kind': kind, 'passed': report.passed, 'metrics': report.metrics}))
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_run(cfg: ExperimentConfig) -> int:
    reports = run(cfg)
    print(dumps({r.kind: r.passed for r in reports}))
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAILED


COMMANDS = {
    'fluid': cmd_fluid,
    'stationary': cmd_stationary,
    'ftsp-pi': cmd_ftsp_pi,
    'simulate': cmd_simulate
}


def main(argv: Optional[List[str]] = None) -> int:
    """Entry point of the fqrt command.

    Parameters
    ----------
    argv: list of string, default=None
        Command-line arguments (defaults to sys.argv).

    Returns
    -------
    int
    """
    args = parse_args(argv)
    level = [logging.WARNING, logging.INFO, logging.DEBUG][min(args.verbose, 2)]
    logging.basicConfig(level=level, format='%(asctime)s %(levelname)s %(name)s: %(message)s')
    try:
        cfg = get_config(args)
        if args.command in COMMANDS:
            return COMMANDS[args.command](cfg, args)
        elif args.command == 'run':
            return cmd_run(cfg)
        return cmd_experiment(cfg, args.command)
    except (FqrtError, OSError) as ex:
        print('error: {}'.format(ex), file=sys.stderr)
        return EXIT_ERROR


if __name__ == '__main__':  # pragma: no cover
    sys.exit(main())
