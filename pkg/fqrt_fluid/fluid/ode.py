# This file is part of the FQR-T fluid model toolkit (fqrt-fluid).
#
# Copyright (c) 2021-2022 New York University.
#
# fqrt-fluid is released under the Revised BSD License. See file LICENSE for
# full license details.

"""Three-dimensional fluid ODE whose right-hand side depends on the state
through the stationary probability pi_12 of the fast-time-scale process, and
a forward Euler integrator for it.

On the set of states where the FTSP is positive recurrent the drift of
q1 - r12 * q2 vanishes, so solutions slide along the switching surface. The
integrator projects states back onto the surface when a step starts on it (or
crosses it at a point of that set) to remove round-off drift.
"""

from typing import Optional, Tuple

import logging

import numpy as np
import scipy.stats

from fqrt_fluid.error import InvalidParameterError, StepTooLargeError
from fqrt_fluid.fluid.trajectory import Trajectory
from fqrt_fluid.ftsp.distribution import pi_12
from fqrt_fluid.ftsp.qbd import QbdSolver
from fqrt_fluid.model.base import FluidState, ModelParams, Region, in_space
from fqrt_fluid.model.core import classify_region


logger = logging.getLogger(__name__)


"""Default step size of the Euler scheme."""
DEFAULT_STEP = 1e-3

"""Default tolerance for states on the switching surface."""
DEFAULT_BOUNDARY_TOL = 1e-9

"""Return value of time_to_ball if the ball is not reached."""
NOT_REACHED = None


def rhs_from_pi(gamma: FluidState, p: ModelParams, pi: float) -> Tuple[float, float, float]:
    """Right-hand side of the fluid ODE for a given value of pi_12."""
    q1, q2, z12 = gamma
    z22 = p.m2 - z12
    pool2 = z12 * p.mu12 + z22 * p.mu22
    dq1 = p.lambda1 - p.m1 * p.mu11 - pi * pool2 - p.theta1 * q1
    dq2 = p.lambda2 - (1.0 - pi) * pool2 - p.theta2 * q2
    dz12 = pi * z22 * p.mu22 - (1.0 - pi) * z12 * p.mu12
    return dq1, dq2, dz12


def ode_rhs(
    gamma: FluidState, p: ModelParams, solver: Optional[QbdSolver] = None,
    atol: Optional[float] = 0.0
) -> Tuple[float, float, float]:
    """Evaluate the right-hand side (dq1, dq2, dz12) of the fluid ODE.

    Parameters
    ----------
    gamma: fqrt_fluid.model.base.FluidState
        Fluid state.
    p: fqrt_fluid.model.base.ModelParams
        Model parameters.
    solver: fqrt_fluid.ftsp.qbd.QbdSolver, default=None
        Solver for the QBD of the FTSP.
    atol: float, default=0
        Tolerance for the switching surface.

    Returns
    -------
    tuple of float
    """
    return rhs_from_pi(gamma, p, pi_12(gamma, p, solver=solver, atol=atol))


def project_surface(gamma: FluidState, p: ModelParams) -> FluidState:
    """Orthogonal projection of (q1, q2) onto the line q1 = r12 * q2."""
    r = p.r
    e = gamma.q1 - r * gamma.q2
    q2 = gamma.q2 + r * e / (1.0 + r * r)
    return FluidState(q1=r * q2, q2=q2, z12=gamma.z12)


def clip_space(gamma: FluidState, p: ModelParams) -> FluidState:
    """Componentwise projection onto the state space."""
    return FluidState(
        q1=max(gamma.q1, 0.0),
        q2=max(gamma.q2, 0.0),
        z12=min(max(gamma.z12, 0.0), p.m2)
    )


def integrate(
    x0: FluidState, p: ModelParams, T: float, h: Optional[float] = DEFAULT_STEP,
    solver: Optional[QbdSolver] = None, atol: Optional[float] = DEFAULT_BOUNDARY_TOL
) -> Trajectory:
    """Integrate the fluid ODE with the forward Euler method. The value of
    pi_12 is computed at every step (a functional-iteration solver is
    warm-started from the previous rate matrix) and each new state is
    projected onto the state space.

    Parameters
    ----------
    x0: fqrt_fluid.model.base.FluidState
        Initial state.
    p: fqrt_fluid.model.base.ModelParams
        Model parameters.
    T: float
        Horizon.
    h: float, default=1e-3
        Step size.
    solver: fqrt_fluid.ftsp.qbd.QbdSolver, default=None
        Solver for the QBD of the FTSP. Defaults to logarithmic reduction
        without diagnostics.
    atol: float, default=1e-9
        Tolerance for states on the switching surface.

    Returns
    -------
    fqrt_fluid.fluid.trajectory.Trajectory

    Raises
    ------
    fqrt_fluid.error.InvalidParameterError
    fqrt_fluid.error.StepTooLargeError
    """
    x0 = FluidState(*[float(v) for v in x0])
    if not in_space(x0, p):
        raise InvalidParameterError('initial state {} not in state space'.format(tuple(x0)))
    if h <= 0:
        raise InvalidParameterError('step size must be positive, got {}'.format(h))
    # Euler steps overshoot the state space once h times a per-customer rate
    # reaches one.
    stiffness = max(p.theta1, p.theta2, p.mu11, p.mu12, p.mu21, p.mu22)
    if h * stiffness >= 1.0:
        raise StepTooLargeError('h={} too large for rates up to {}'.format(h, stiffness))
    solver = solver if solver is not None else QbdSolver(diagnostics=False)
    steps = int(round(T / h))
    states = np.empty((steps + 1, 3))
    pis = np.empty(steps + 1)
    x = x0
    for i in range(steps + 1):
        region = classify_region(x, p, atol=atol)
        if region == Region.BOUNDARY_A:
            x = project_surface(x, p)
        pi = pi_12(x, p, solver=solver, atol=atol)
        states[i] = x
        pis[i] = pi
        if i == steps:
            break
        f = rhs_from_pi(x, p, pi)
        y = FluidState(*[x[c] + h * f[c] for c in range(3)])
        violation = max(-y.q1, -y.q2, -y.z12, y.z12 - p.m2, 0.0)
        if violation > h * total_rate_bound(x, p):
            raise StepTooLargeError('step {} leaves the state space by {:.3g}'.format(i, violation))
        if region != Region.BOUNDARY_A:
            y = _slide_on_crossing(x, y, p, atol)
        x = clip_space(y, p)
    logger.debug('integrated %d steps of size %g', steps, h)
    return Trajectory(t0=0.0, h=h, states=states, pi_values=pis)


def total_rate_bound(gamma: FluidState, p: ModelParams) -> float:
    """Bound on the norm of the ODE right-hand side at gamma."""
    return (
        p.lambda1 + p.lambda2 + p.mu11 * p.m1 + (p.mu12 + p.mu22) * p.m2
        + p.theta1 * gamma.q1 + p.theta2 * gamma.q2
    )


def _slide_on_crossing(x: FluidState, y: FluidState, p: ModelParams, atol: float) -> FluidState:
    """Project y onto the switching surface if the step from x to y crosses
    the surface at a point where the FTSP is positive recurrent.
    """
    r = p.r
    ex = x.q1 - r * x.q2
    ey = y.q1 - r * y.q2
    if ex * ey >= 0 or abs(ey) <= atol:
        return y if abs(ey) > atol else project_surface(y, p)
    s = ex / (ex - ey)
    crossing = FluidState(*[x[c] + s * (y[c] - x[c]) for c in range(3)])
    crossing = project_surface(crossing, p)
    if classify_region(crossing, p, atol=atol) == Region.BOUNDARY_A:
        return project_surface(y, p)
    return y


def time_to_ball(traj: Trajectory, target: FluidState, eps: float) -> Optional[float]:
    """First grid time at which the L1 distance to the target is at most eps.
    Returns NOT_REACHED (None) if the trajectory never enters the ball.

    Parameters
    ----------
    traj: fqrt_fluid.fluid.trajectory.Trajectory
        Trajectory.
    target: fqrt_fluid.model.base.FluidState
        Center of the ball.
    eps: float
        Radius of the ball.

    Returns
    -------
    float or None
    """
    inside = np.flatnonzero(traj.distance_to(target) <= eps)
    if len(inside) == 0:
        return NOT_REACHED
    return float(traj.times[inside[0]])


def log_distance_fit(
    traj: Trajectory, target: FluidState, t_start: float, t_end: float
) -> Tuple[float, float]:
    """Least-squares fit of the logarithm of the distance to the target over
    the grid times in [t_start, t_end]. Returns slope and R^2.

    Parameters
    ----------
    traj: fqrt_fluid.fluid.trajectory.Trajectory
        Trajectory.
    target: fqrt_fluid.model.base.FluidState
        Target state (e.g., the stationary point).
    t_start: float
        Start of the fitting window.
    t_end: float
        End of the fitting window.

    Returns
    -------
    tuple of float
    """
    t = traj.times
    d = traj.distance_to(target)
    mask = (t >= t_start) & (t <= t_end) & (d > 0)
    fit = scipy.stats.linregress(t[mask], np.log(d[mask]))
    return float(fit.slope), float(fit.rvalue ** 2)


def trapezoid_increments(traj: Trajectory, p: ModelParams) -> np.ndarray:
    """Per-step L1 difference between the state increment and the trapezoidal
    quadrature of the ODE right-hand side over the step. The values of pi_12
    are taken from the trajectory.

    Parameters
    ----------
    traj: fqrt_fluid.fluid.trajectory.Trajectory
        ODE trajectory with pi values.
    p: fqrt_fluid.model.base.ModelParams
        Model parameters.

    Returns
    -------
    numpy.ndarray
    """
    f = np.array([
        rhs_from_pi(traj.state(i), p, traj.pi_values[i]) for i in range(len(traj))
    ])
    increments = np.diff(traj.states, axis=0)
    quadrature = 0.5 * traj.h * (f[:-1] + f[1:])
    return np.sum(np.abs(increments - quadrature), axis=1)
