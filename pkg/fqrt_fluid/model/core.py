# This file is part of the FQR-T fluid model toolkit (fqrt-fluid).
#
# Copyright (c) 2021-2022 New York University.
#
# fqrt-fluid is released under the Revised BSD License. See file LICENSE for
# full license details.

"""Functions on the model parameters and the fluid state space: derived
steady-state quantities, the overload check, the FTSP drift rates, the region
classification, the stationary point of the fluid ODE and the integer-valued
scaled instances of the n-th system.
"""

from typing import List, Tuple

import math

from fqrt_fluid.error import InvalidParameterError
from fqrt_fluid.ftsp.rates import ftsp_rates
from fqrt_fluid.model.base import (
    DerivedQuantities, FluidState, ModelParams, Region, ScaledInstance
)


"""Exponent of the threshold scaling sequence c_n = n ** THRESHOLD_EXPONENT."""
THRESHOLD_EXPONENT = 0.6

"""Tolerance for rounding errors in the coordinates of the stationary point."""
STATIONARY_TOL = 1e-12


def derived_quantities(p: ModelParams) -> DerivedQuantities:
    """Compute the traffic intensities, the stand-alone fluid queue lengths and
    the stand-alone fluid idleness of both classes.

    Parameters
    ----------
    p: fqrt_fluid.model.base.ModelParams
        Model parameters.

    Returns
    -------
    fqrt_fluid.model.base.DerivedQuantities
    """
    return DerivedQuantities(
        rho1=p.lambda1 / (p.mu11 * p.m1),
        rho2=p.lambda2 / (p.mu22 * p.m2),
        qa1=max(p.lambda1 - p.mu11 * p.m1, 0.0) / p.theta1,
        qa2=max(p.lambda2 - p.mu22 * p.m2, 0.0) / p.theta2,
        sa1=max(p.m1 - p.lambda1 / p.mu11, 0.0),
        sa2=max(p.m2 - p.lambda2 / p.mu22, 0.0)
    )


def validate_overload(p: ModelParams) -> List[str]:
    """Check the overload conditions: class 1 is overloaded beyond the spare
    capacity of pool 2 (theta1 * qa1 > mu12 * sa2), and class 1 is more
    overloaded than class 2 (qa1 > r12 * qa2). The function reports violated
    conditions and never raises an error.

    Parameters
    ----------
    p: fqrt_fluid.model.base.ModelParams
        Model parameters.

    Returns
    -------
    list of string
    """
    dq = derived_quantities(p)
    violations = list()
    lhs, rhs = p.theta1 * dq.qa1, p.mu12 * dq.sa2
    if not lhs > rhs:
        violations.append(
            'class 1 not overloaded: theta1*qa1={:.12g} <= mu12*sa2={:.12g}'.format(lhs, rhs)
        )
    lhs, rhs = dq.qa1, p.r * dq.qa2
    if not lhs > rhs:
        violations.append(
            'class 1 not more overloaded: qa1={:.12g} <= r12*qa2={:.12g}'.format(lhs, rhs)
        )
    return violations


def drift_pair(gamma: FluidState, p: ModelParams) -> Tuple[float, float]:
    """Get the drift rates (delta_minus, delta_plus) of the fast-time-scale
    process below and above zero at the given fluid state.

    Parameters
    ----------
    gamma: fqrt_fluid.model.base.FluidState
        Fluid state.
    p: fqrt_fluid.model.base.ModelParams
        Model parameters.

    Returns
    -------
    tuple of float
    """
    return ftsp_rates(gamma, p).drifts(p.r)


def classify_region(gamma: FluidState, p: ModelParams, atol: float = 0.0) -> Region:
    """Get the region of the state space that contains the given fluid state.
    States with |q1 - r12 * q2| <= atol are treated as boundary states. The
    boundary is split by the signs of the FTSP drift rates.

    Parameters
    ----------
    gamma: fqrt_fluid.model.base.FluidState
        Fluid state.
    p: fqrt_fluid.model.base.ModelParams
        Model parameters.
    atol: float, default=0
        Absolute tolerance for the switching surface.

    Returns
    -------
    fqrt_fluid.model.base.Region
    """
    d = gamma.q1 - p.r * gamma.q2
    if d > atol:
        return Region.S_PLUS
    elif d < -atol:
        return Region.S_MINUS
    delta_minus, delta_plus = drift_pair(gamma, p)
    if delta_minus > 0 > delta_plus:
        return Region.BOUNDARY_A
    elif delta_plus >= 0:
        return Region.BOUNDARY_A_PLUS
    return Region.BOUNDARY_A_MINUS


def stationary_point(p: ModelParams) -> FluidState:
    """Compute the unique stationary point x* = (q1*, q2*, z12*) of the fluid
    ODE. The first coordinate is computed from the second so that the point
    lies exactly on the switching surface q1 = r12 * q2.

    Parameters
    ----------
    p: fqrt_fluid.model.base.ModelParams
        Model parameters.

    Returns
    -------
    fqrt_fluid.model.base.FluidState

    Raises
    ------
    fqrt_fluid.error.InvalidParameterError
    """
    r = p.r
    num = p.theta2 * (p.lambda1 - p.m1 * p.mu11) - r * p.theta1 * (p.lambda2 - p.m2 * p.mu22)
    den = r * p.theta1 * p.mu22 + p.theta2 * p.mu12
    z12 = num / den
    if z12 < -STATIONARY_TOL or z12 > p.m2 + STATIONARY_TOL:
        raise InvalidParameterError('z12*={:.12g} outside [0, m2]'.format(z12))
    z12 = min(max(z12, 0.0), p.m2)
    q2 = (p.lambda2 - p.mu22 * (p.m2 - z12)) / p.theta2
    if q2 < -STATIONARY_TOL:
        raise InvalidParameterError('q2*={:.12g} is negative'.format(q2))
    q2 = max(q2, 0.0)
    return FluidState(q1=r * q2, q2=q2, z12=z12)


def stationary_point_6(p: ModelParams) -> Tuple[float, float, float, float, float, float]:
    """Get the six-dimensional stationary point (q1*, q2*, m1, z12*, 0,
    m2 - z12*) that corresponds to the fluid limit of the full system state
    (Q1, Q2, Z11, Z12, Z21, Z22).

    Parameters
    ----------
    p: fqrt_fluid.model.base.ModelParams
        Model parameters.

    Returns
    -------
    tuple of float
    """
    x = stationary_point(p)
    return (x.q1, x.q2, p.m1, x.z12, 0.0, p.m2 - x.z12)


# -- Scaled instances ---------------------------------------------------------

def round_half_up(x: float) -> int:
    """Round to the nearest integer with ties rounded up."""
    return int(math.floor(x + 0.5))


def scaled_instance(p: ModelParams, n: int) -> ScaledInstance:
    """Get the integer-valued parameters of the n-th system. Arrival rates and
    staffing levels are rounded products with n. Thresholds are rounded
    values of kappa * c_n with c_n = n ** 0.6 that are rounded up to the next
    multiple of the denominator of the respective queue ratio.

    Parameters
    ----------
    p: fqrt_fluid.model.base.ModelParams
        Model parameters.
    n: int
        Scale index.

    Returns
    -------
    fqrt_fluid.model.base.ScaledInstance

    Raises
    ------
    fqrt_fluid.error.InvalidParameterError
    """
    if n < 1:
        raise InvalidParameterError('scale index must be positive, got {}'.format(n))
    m1_n = round_half_up(n * p.m1)
    m2_n = round_half_up(n * p.m2)
    if m1_n == 0 or m2_n == 0:
        raise InvalidParameterError('n={} results in an empty server pool'.format(n))
    c_n = n ** THRESHOLD_EXPONENT

    def threshold(kappa: float, den: int) -> int:
        return den * int(math.ceil(round_half_up(kappa * c_n) / den))

    return ScaledInstance(
        n=n,
        lambda1_n=round_half_up(n * p.lambda1),
        lambda2_n=round_half_up(n * p.lambda2),
        m1_n=m1_n,
        m2_n=m2_n,
        k12_n=threshold(p.kappa12, p.r12.denominator),
        k21_n=threshold(p.kappa21, p.r21.denominator),
        c_n=c_n,
        params=p
    )
