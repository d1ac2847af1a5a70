# This file is part of the FQR-T fluid model toolkit (fqrt-fluid).
#
# Copyright (c) 2021-2022 New York University.
#
# fqrt-fluid is released under the Revised BSD License. See file LICENSE for
# full license details.

"""Experiments that compare simulated sample paths of the n-th system with
the fluid model: the FWLLN comparison of mean scaled paths with the ODE
solution, the averaging-principle check at a fixed time, the time-expanded
comparison with the FTSP, the state-space collapse metrics, and the
steady-state interchange check.

Experiments register themselves by name in the global registry. Each
experiment takes an ExperimentConfig and returns a ComparisonReport. All
reported values are deterministic functions of the configuration and the
master seed.
"""

from typing import Callable, Dict, List, Optional, Tuple

import logging
import math
import time

import numpy as np
import pandas as pd

from fqrt_fluid.ctmc.simulate import grid_size, queue_difference, scale_path, simulate
from fqrt_fluid.ctmc.state import SystemState, initial_state
from fqrt_fluid.error import InvalidParameterError, NotInAError
from fqrt_fluid.fluid.ode import integrate
from fqrt_fluid.fluid.trajectory import Trajectory
from fqrt_fluid.ftsp.distribution import ftsp_stationary_distribution
from fqrt_fluid.ftsp.simulate import simulate_ftsp
from fqrt_fluid.harness.config import ExperimentConfig, config_to_dict
from fqrt_fluid.harness.metrics import cdf_from_distribution, empirical_cdf, levy_distance
from fqrt_fluid.harness.report import (
    ComparisonReport, write_report, write_summary, write_timings
)
from fqrt_fluid.harness.workers import replicate
from fqrt_fluid.model.base import FluidState, ModelParams, Region, ScaledInstance
from fqrt_fluid.model.core import (
    classify_region, scaled_instance, stationary_point, stationary_point_6,
    validate_overload
)
from fqrt_fluid.rng import (
    STREAM_AP, STREAM_EXPAND, STREAM_FTSP, STREAM_FWLLN, STREAM_SSC,
    STREAM_STEADY, replication_seed
)
from fqrt_fluid.version import __version__


logger = logging.getLogger(__name__)


"""Registry of experiments by name."""
registry: Dict[str, Callable[[ExperimentConfig], ComparisonReport]] = dict()


def experiment(name: str) -> Callable:
    """Decorator that registers an experiment function under the given name.

    Parameters
    ----------
    name: string
        Unique experiment name.

    Returns
    -------
    callable
    """
    def register(func: Callable) -> Callable:
        registry[name] = func
        return func

    return register


"""Replication count below which Levy distances are flagged as unreliable."""
LOW_SAMPLE_REPLICATIONS = 100

"""Half-width of the time window around t_check that has to stay in A."""
AP_WINDOW = 0.1


# -- Helpers ------------------------------------------------------------------

def check_overload(p: ModelParams):
    """Raise an error carrying the overload report if the parameters do not
    satisfy the overload conditions.

    Raises
    ------
    fqrt_fluid.error.InvalidParameterError
    """
    violations = validate_overload(p)
    if violations:
        raise InvalidParameterError(
            'overload conditions violated: {}'.format('; '.join(violations)),
            violations=violations
        )


def check_initial_region(cfg: ExperimentConfig):
    """The initial state has to be in A, A+ or S+.

    Raises
    ------
    fqrt_fluid.error.InvalidParameterError
    """
    region = classify_region(cfg.x0, cfg.params, atol=cfg.solver.boundary_tol)
    if region not in (Region.BOUNDARY_A, Region.BOUNDARY_A_PLUS, Region.S_PLUS):
        raise InvalidParameterError(
            'initial state {} is in region {}'.format(tuple(cfg.x0), region.label)
        )


def solve_ode(cfg: ExperimentConfig, T: float, x0: Optional[FluidState] = None) -> Trajectory:
    """Integrate the fluid ODE with the solver settings of the configuration."""
    return integrate(
        cfg.x0 if x0 is None else x0,
        cfg.params,
        T,
        h=cfg.h,
        solver=cfg.solver.qbd_solver(),
        atol=cfg.solver.boundary_tol
    )


def provenance(cfg: ExperimentConfig) -> Dict:
    return {'version': __version__, 'seed': cfg.seed, 'config': config_to_dict(cfg)}


def _stderr(values: np.ndarray) -> float:
    if len(values) < 2:
        return 0.0
    return float(np.std(values, ddof=1) / math.sqrt(len(values)))


def _run_replications(
    cfg: ExperimentConfig, task: Callable, stream: int, n: int, args: Tuple
) -> List:
    """Run the configured number of replications of a task. The replication
    seed is appended to the given arguments.
    """
    arguments = [
        args + (replication_seed(cfg.seed, stream, n, rep),)
        for rep in range(cfg.replications)
    ]
    return replicate(task, arguments, workers=cfg.workers)


# -- Replication tasks --------------------------------------------------------
#
# Tasks are module-level functions so that they can be sent to worker
# processes.

def scaled_path_task(
    inst: ScaledInstance, init: SystemState, T: float, dt_sample: float, seed
) -> np.ndarray:
    """Scaled (Q1, Q2, Z12) path on the sample grid."""
    path = simulate(inst, init, T, seed, dt_sample=dt_sample)
    return scale_path(path, inst.n).states


def difference_at_task(
    inst: ScaledInstance, init: SystemState, t: float, seed
) -> float:
    """Value of the queue-difference process D12 at time t."""
    path = simulate(inst, init, t, seed, dt_sample=t)
    return float(queue_difference(path, inst)[-1])


def difference_path_task(
    inst: ScaledInstance, init: SystemState, T: float, dt_sample: float, seed
) -> np.ndarray:
    """Lattice values of the queue-difference process on the sample grid."""
    path = simulate(inst, init, T, seed, dt_sample=dt_sample)
    return queue_difference(path, inst, lattice=True)


def ftsp_path_task(
    gamma: FluidState, p: ModelParams, d0: int, times: np.ndarray, seed
) -> np.ndarray:
    """Lattice values of an FTSP path at the given times."""
    return simulate_ftsp(gamma, p, d0, float(times[-1]), seed).value_at(times)


def ssc_task(
    inst: ScaledInstance, init: SystemState, T: float, dt_sample: float,
    window: np.ndarray, seed
) -> Tuple[float, float, float, int]:
    """State-space collapse metrics of a single sample path: the fraction of
    grid times with reverse sharing or idle agents, the maxima of |D12| and
    of |Q1 - r12 * Q2| over the grid times in the window, and the largest
    value of Z21.
    """
    path = simulate(inst, init, T, seed, dt_sample=dt_sample)
    Q1, Q2, Z11, Z12, Z21, Z22 = path.states.T
    collapsed = (Z21 == 0) & (Z11 + Z21 == inst.m1_n) & (Z12 + Z22 == inst.m2_n)
    centred = np.abs(queue_difference(path, inst))
    p = inst.params
    uncentred = np.abs(Q1 - float(p.r12) * Q2)
    return (
        float(1.0 - np.mean(collapsed)),
        float(np.max(centred[window])) if np.any(window) else 0.0,
        float(np.max(uncentred[window])) if np.any(window) else 0.0,
        int(np.max(Z21))
    )


def time_average_task(
    inst: ScaledInstance, init: SystemState, T: float, dt_sample: float,
    burn_in: float, seed
) -> np.ndarray:
    """Time average of the scaled six-dimensional state over [burn_in, T]."""
    path = simulate(inst, init, T, seed, dt_sample=dt_sample)
    mask = path.times >= burn_in - 1e-9
    return np.mean(path.states[mask], axis=0) / inst.n


# -- Experiments --------------------------------------------------------------

@experiment('fwlln')
def compare_fwlln(cfg: ExperimentConfig) -> ComparisonReport:
    """Compare the mean scaled sample path of the n-th system with the ODE
    solution for each n in the configured list. The error for n is the
    maximum over the sample grid of the L1 distance between the mean of the
    scaled paths and the ODE solution. The experiment passes if the error
    for the largest n is below the threshold and smaller than the error for
    the smallest n.

    Parameters
    ----------
    cfg: fqrt_fluid.harness.config.ExperimentConfig
        Experiment configuration.

    Returns
    -------
    fqrt_fluid.harness.report.ComparisonReport

    Raises
    ------
    fqrt_fluid.error.InvalidParameterError
    """
    p = cfg.params
    check_overload(p)
    check_initial_region(cfg)
    timings = dict()
    start = time.perf_counter()
    traj = solve_ode(cfg, cfg.T)
    timings['ode'] = time.perf_counter() - start
    times = cfg.dt_sample * np.arange(grid_size(cfg.T, cfg.dt_sample))
    ode = traj.at(times)
    details = pd.DataFrame({'t': times, 'q1': ode[:, 0], 'q2': ode[:, 1], 'z12': ode[:, 2]})
    rows = list()
    for n in cfg.n_list:
        logger.info('fwlln: n=%d, %d replications', n, cfg.replications)
        start = time.perf_counter()
        inst = scaled_instance(p, n)
        init = initial_state(inst, cfg.x0)
        paths = np.array(_run_replications(
            cfg, scaled_path_task, STREAM_FWLLN, n, (inst, init, cfg.T, cfg.dt_sample)
        ))
        mean = np.mean(paths, axis=0)
        error = float(np.max(np.sum(np.abs(mean - ode), axis=1)))
        single = np.max(np.sum(np.abs(paths - ode), axis=2), axis=1)
        rows.append({
            'n': n,
            'sup_error': error,
            'replication_error': float(np.mean(single)),
            'replication_stderr': _stderr(single),
            'replications': cfg.replications
        })
        for i, col in enumerate(['q1', 'q2', 'z12']):
            details['{}_n{}'.format(col, n)] = mean[:, i]
        timings['n={}'.format(n)] = time.perf_counter() - start
    df = pd.DataFrame(rows)
    errors = df['sup_error'].values
    notes = list()
    decreasing = bool(errors[-1] < errors[0]) if len(errors) > 1 else True
    if not decreasing:
        logger.warning('fwlln: error does not decrease in n: %s', errors)
        notes.append('error does not decrease from n={} to n={}'.format(
            cfg.n_list[0], cfg.n_list[-1]
        ))
    finite = bool(np.all(np.isfinite(errors)))
    passed = finite and decreasing and bool(errors[-1] <= cfg.thresholds.fwlln_error)
    return ComparisonReport(
        kind='fwlln',
        passed=passed,
        metrics={
            'error_min_n': float(errors[0]),
            'error_max_n': float(errors[-1]),
            'decreasing': decreasing
        },
        rows=df,
        details={'mean_paths': details},
        notes=notes,
        timings=timings,
        provenance=provenance(cfg)
    )


@experiment('ap')
def ap_check(cfg: ExperimentConfig, t_check: Optional[float] = None) -> ComparisonReport:
    """Compare the empirical law of the queue difference D12 at time t_check
    with the stationary law of the FTSP at the ODE state x(t_check). The ODE
    solution has to stay in A on a window around t_check.

    Parameters
    ----------
    cfg: fqrt_fluid.harness.config.ExperimentConfig
        Experiment configuration.
    t_check: float, default=None
        Time of the comparison. Defaults to the configured value.

    Returns
    -------
    fqrt_fluid.harness.report.ComparisonReport

    Raises
    ------
    fqrt_fluid.error.InvalidParameterError
    fqrt_fluid.error.NotInAError
    """
    p = cfg.params
    check_overload(p)
    t_check = cfg.t_check if t_check is None else t_check
    timings = dict()
    start = time.perf_counter()
    traj = solve_ode(cfg, t_check + AP_WINDOW)
    times = traj.times
    window = np.flatnonzero((times >= t_check - AP_WINDOW - 1e-12) & (times <= t_check + AP_WINDOW + 1e-12))
    for i in window:
        region = classify_region(traj.state(i), p, atol=cfg.solver.boundary_tol)
        if region != Region.BOUNDARY_A:
            raise NotInAError('ODE is in region {} at t={:.6g}'.format(region.label, times[i]))
    gamma = traj.state(int(round(t_check / cfg.h)))
    reference = ftsp_stationary_distribution(
        gamma, p, tail_epsilon=cfg.solver.tail_epsilon, atol=cfg.solver.boundary_tol
    )
    F_ref = cdf_from_distribution(reference)
    pi = reference.positive_mass() / reference.total()
    timings['ftsp'] = time.perf_counter() - start
    notes = list()
    if cfg.replications < LOW_SAMPLE_REPLICATIONS:
        logger.warning('ap: only %d replications', cfg.replications)
        notes.append('low sample size: {} replications'.format(cfg.replications))
    dump = reference.to_frame()
    dump.insert(0, 'source', 'ftsp')
    dump['value'] = reference.differences()
    frames = [dump]
    rows = list()
    for n in cfg.n_list:
        logger.info('ap: n=%d, %d replications', n, cfg.replications)
        start = time.perf_counter()
        inst = scaled_instance(p, n)
        init = initial_state(inst, cfg.x0)
        samples = np.array(_run_replications(
            cfg, difference_at_task, STREAM_AP, n, (inst, init, t_check)
        ))
        distance = levy_distance(empirical_cdf(samples), F_ref)
        rows.append({
            'n': n,
            't_check': t_check,
            'levy_distance': distance,
            'positive_fraction': float(np.mean(samples > 0)),
            'pi_12': pi,
            'replications': cfg.replications
        })
        values, counts = np.unique(samples, return_counts=True)
        frames.append(pd.DataFrame({
            'source': 'n={}'.format(n),
            'value': values,
            'mass': counts / len(samples)
        }))
        timings['n={}'.format(n)] = time.perf_counter() - start
    df = pd.DataFrame(rows)
    distance = float(df['levy_distance'].values[-1])
    return ComparisonReport(
        kind='ap',
        passed=distance <= cfg.thresholds.ap_levy,
        metrics={
            'levy_distance_max_n': distance,
            'pi_12': pi,
            'q1': gamma.q1,
            'q2': gamma.q2,
            'z12': gamma.z12
        },
        rows=df,
        details={'distributions': pd.concat(frames, ignore_index=True)},
        notes=notes,
        timings=timings,
        provenance=provenance(cfg)
    )


@experiment('expand')
def time_expansion_check(
    cfg: ExperimentConfig, gamma_fraction: Optional[FluidState] = None,
    s_horizon: Optional[float] = None
) -> ComparisonReport:
    """Compare the time-expanded queue difference D12(s/n) of the n-th system
    started at round(n * gamma) with the FTSP at gamma started from the same
    initial difference. For each s on the grid the Levy distance between the
    marginal laws across replications is computed.

    Parameters
    ----------
    cfg: fqrt_fluid.harness.config.ExperimentConfig
        Experiment configuration.
    gamma_fraction: fqrt_fluid.model.base.FluidState, default=None
        Fluid state in A. Defaults to the configured initial state.
    s_horizon: float, default=None
        Horizon on the fast time scale. Defaults to the configured value.

    Returns
    -------
    fqrt_fluid.harness.report.ComparisonReport

    Raises
    ------
    fqrt_fluid.error.InvalidParameterError
    fqrt_fluid.error.NotInAError
    """
    p = cfg.params
    check_overload(p)
    gamma = cfg.x0 if gamma_fraction is None else gamma_fraction
    s_horizon = cfg.s_horizon if s_horizon is None else s_horizon
    region = classify_region(gamma, p, atol=cfg.solver.boundary_tol)
    if region != Region.BOUNDARY_A:
        raise NotInAError('state {} is in region {}'.format(tuple(gamma), region.label))
    s_grid = cfg.s_step * np.arange(grid_size(s_horizon, cfg.s_step))
    k = p.r12.denominator
    details = pd.DataFrame({'s': s_grid})
    rows = list()
    timings = dict()
    notes = list()
    if cfg.replications < LOW_SAMPLE_REPLICATIONS:
        logger.warning('expand: only %d replications', cfg.replications)
        notes.append('low sample size: {} replications'.format(cfg.replications))
    for n in cfg.n_list:
        logger.info('expand: n=%d, %d replications', n, cfg.replications)
        start = time.perf_counter()
        inst = scaled_instance(p, n)
        init = initial_state(inst, gamma)
        ctmc = np.array(_run_replications(
            cfg, difference_path_task, STREAM_EXPAND, n,
            (inst, init, s_horizon / n, cfg.s_step / n)
        ))
        d0 = int(ctmc[0, 0])
        arguments = [
            (gamma, p, d0, s_grid, replication_seed(cfg.seed, STREAM_FTSP, n, rep))
            for rep in range(cfg.replications)
        ]
        ftsp = np.array(replicate(ftsp_path_task, arguments, workers=cfg.workers))
        size = min(ctmc.shape[1], len(s_grid))
        distances = np.array([
            levy_distance(empirical_cdf(ctmc[:, i] / k), empirical_cdf(ftsp[:, i] / k))
            for i in range(size)
        ])
        details['levy_n{}'.format(n)] = np.pad(distances, (0, len(s_grid) - size), mode='edge')
        rows.append({
            'n': n,
            'd0': d0 / k,
            'max_levy': float(np.max(distances)),
            'mean_levy': float(np.mean(distances)),
            'replications': cfg.replications
        })
        timings['n={}'.format(n)] = time.perf_counter() - start
    df = pd.DataFrame(rows)
    means = df['mean_levy'].values
    if len(means) > 1 and not means[-1] <= means[0]:
        logger.warning('expand: mean distance does not decrease in n: %s', means)
        notes.append('mean distance does not decrease from n={} to n={}'.format(
            cfg.n_list[0], cfg.n_list[-1]
        ))
    distance = float(df['max_levy'].values[-1])
    return ComparisonReport(
        kind='expand',
        passed=distance <= cfg.thresholds.expand_levy,
        metrics={'max_levy_max_n': distance, 'mean_levy_max_n': float(means[-1])},
        rows=df,
        details={'distances': details},
        notes=notes,
        timings=timings,
        provenance=provenance(cfg)
    )


def boundary_window(traj: Trajectory, p: ModelParams, atol: float, times: np.ndarray) -> np.ndarray:
    """Mask of the sample times in the first interval during which the ODE
    solution stays in A.
    """
    in_a = np.array([
        classify_region(traj.state(i), p, atol=atol) == Region.BOUNDARY_A
        for i in range(len(traj))
    ])
    if not np.any(in_a):
        return np.zeros(len(times), dtype=bool)
    first = int(np.argmax(in_a))
    last = first
    while last + 1 < len(in_a) and in_a[last + 1]:
        last += 1
    t1, t2 = traj.times[first], traj.times[last]
    return (times >= t1 - 1e-9) & (times <= t2 + 1e-9)


@experiment('ssc')
def ssc_check(cfg: ExperimentConfig) -> ComparisonReport:
    """State-space collapse metrics for each n: (a) the fraction of grid times
    at which some class-2 customer is served in pool 1 or some agent is idle,
    and (b) the maximum of |D12| / (log n)^2 over the grid times in the
    interval where the ODE solution is in A. The uncentred variant
    |Q1 - r12 * Q2| / (log n)^2 is reported as well. The experiment passes if
    the collapse fraction for the largest n reaches the threshold and metric
    (b) decreases from the smallest to the largest n.

    Parameters
    ----------
    cfg: fqrt_fluid.harness.config.ExperimentConfig
        Experiment configuration.

    Returns
    -------
    fqrt_fluid.harness.report.ComparisonReport

    Raises
    ------
    fqrt_fluid.error.InvalidParameterError
    """
    p = cfg.params
    check_overload(p)
    check_initial_region(cfg)
    timings = dict()
    start = time.perf_counter()
    traj = solve_ode(cfg, cfg.T)
    times = cfg.dt_sample * np.arange(grid_size(cfg.T, cfg.dt_sample))
    window = boundary_window(traj, p, cfg.solver.boundary_tol, times)
    timings['ode'] = time.perf_counter() - start
    rows = list()
    for n in cfg.n_list:
        logger.info('ssc: n=%d, %d replications', n, cfg.replications)
        start = time.perf_counter()
        inst = scaled_instance(p, n)
        init = initial_state(inst, cfg.x0)
        results = _run_replications(
            cfg, ssc_task, STREAM_SSC, n, (inst, init, cfg.T, cfg.dt_sample, window)
        )
        fraction, centred, uncentred, z21 = [np.array(v) for v in zip(*results)]
        scale = math.log(n) ** 2
        rows.append({
            'n': n,
            'not_collapsed_fraction': float(np.mean(fraction)),
            'max_z21': int(np.max(z21)),
            'centred_metric': float(np.mean(centred)) / scale,
            'centred_stderr': _stderr(centred) / scale,
            'uncentred_metric': float(np.mean(uncentred)) / scale,
            'uncentred_stderr': _stderr(uncentred) / scale,
            'replications': cfg.replications
        })
        timings['n={}'.format(n)] = time.perf_counter() - start
    df = pd.DataFrame(rows)
    notes = list()
    if not np.any(window):
        notes.append('ODE solution never enters A; metric (b) is zero')
    metric = df['centred_metric'].values
    decreasing = bool(metric[-1] < metric[0]) if len(metric) > 1 else True
    if not decreasing:
        logger.warning('ssc: metric does not decrease in n: %s', metric)
        notes.append('metric (b) does not decrease from n={} to n={}'.format(
            cfg.n_list[0], cfg.n_list[-1]
        ))
    collapsed = 1.0 - float(df['not_collapsed_fraction'].values[-1])
    return ComparisonReport(
        kind='ssc',
        passed=decreasing and collapsed >= cfg.thresholds.ssc_fraction,
        metrics={
            'collapsed_fraction_max_n': collapsed,
            'centred_metric_max_n': float(metric[-1]),
            'decreasing': decreasing,
            'window_start': float(times[window][0]) if np.any(window) else None,
            'window_end': float(times[window][-1]) if np.any(window) else None
        },
        rows=df,
        notes=notes,
        timings=timings,
        provenance=provenance(cfg)
    )


@experiment('steady')
def steady_state_check(
    cfg: ExperimentConfig, T_long: Optional[float] = None,
    burn_in: Optional[float] = None
) -> ComparisonReport:
    """Compare the time average of the scaled six-dimensional state over
    [burn_in, T_long] with the six-dimensional stationary point. The
    deviation for n is the L1 distance of the average over all replications.

    Parameters
    ----------
    cfg: fqrt_fluid.harness.config.ExperimentConfig
        Experiment configuration.
    T_long: float, default=None
        Length of the simulation. Defaults to the configured value.
    burn_in: float, default=None
        Start of the averaging window. Defaults to the configured value (a
        quarter of T_long unless given).

    Returns
    -------
    fqrt_fluid.harness.report.ComparisonReport

    Raises
    ------
    fqrt_fluid.error.InvalidParameterError
    """
    p = cfg.params
    check_overload(p)
    if T_long is not None:
        cfg = cfg.replace(T_long=T_long)
    T_long = cfg.T_long
    burn_in = cfg.burn_in_time if burn_in is None else burn_in
    if burn_in >= T_long:
        raise InvalidParameterError('burn-in {} not less than {}'.format(burn_in, T_long))
    target = np.array(stationary_point_6(p))
    rows = list()
    timings = dict()
    for n in cfg.n_list:
        logger.info('steady: n=%d, %d replications', n, cfg.replications)
        start = time.perf_counter()
        inst = scaled_instance(p, n)
        init = initial_state(inst, cfg.x0)
        averages = np.array(_run_replications(
            cfg, time_average_task, STREAM_STEADY, n,
            (inst, init, T_long, cfg.dt_sample, burn_in)
        ))
        mean = np.mean(averages, axis=0)
        row = {'n': n}
        for name, value in zip(['q1', 'q2', 'z11', 'z12', 'z21', 'z22'], mean):
            row[name] = float(value)
        row['deviation'] = float(np.sum(np.abs(mean - target)))
        row['replications'] = cfg.replications
        rows.append(row)
        timings['n={}'.format(n)] = time.perf_counter() - start
    df = pd.DataFrame(rows)
    deviation = df['deviation'].values
    notes = list()
    if len(deviation) > 1 and not deviation[-1] <= deviation[0]:
        logger.warning('steady: deviation does not decrease in n: %s', deviation)
        notes.append('deviation does not decrease from n={} to n={}'.format(
            cfg.n_list[0], cfg.n_list[-1]
        ))
    x = stationary_point(p)
    return ComparisonReport(
        kind='steady',
        passed=bool(deviation[-1] <= cfg.thresholds.steady_deviation),
        metrics={
            'deviation_max_n': float(deviation[-1]),
            'T_long': T_long,
            'burn_in': burn_in,
            'q1_star': x.q1,
            'q2_star': x.q2,
            'z12_star': x.z12
        },
        rows=df,
        notes=notes,
        timings=timings,
        provenance=provenance(cfg)
    )


# -- Runner -------------------------------------------------------------------

def run_experiment(kind: str, cfg: ExperimentConfig) -> ComparisonReport:
    """Run a registered experiment and write its report files.

    Raises
    ------
    ValueError
    """
    func = registry.get(kind)
    if func is None:
        raise ValueError("unknown experiment '{}'".format(kind))
    logger.info('running experiment %s', kind)
    report = func(cfg)
    write_report(report, cfg.output_dir, fmt=cfg.format)
    logger.info('%s: %s', kind, 'PASS' if report.passed else 'FAIL')
    return report


def run(cfg: ExperimentConfig) -> List[ComparisonReport]:
    """Run all experiments of the configuration. Writes one report per
    experiment, the pass/fail summary and the timings file.

    Parameters
    ----------
    cfg: fqrt_fluid.harness.config.ExperimentConfig
        Experiment configuration.

    Returns
    -------
    list of fqrt_fluid.harness.report.ComparisonReport
    """
    reports = [run_experiment(kind, cfg) for kind in cfg.kinds]
    write_summary(reports, cfg.output_dir)
    write_timings(reports, cfg.output_dir)
    return reports
