# This file is part of the FQR-T fluid model toolkit (fqrt-fluid).
#
# Copyright (c) 2021-2022 New York University.
#
# fqrt-fluid is released under the Revised BSD License. See file LICENSE for
# full license details.

"""Correspondence between the frozen queue-difference process of the n-th
system and the FTSP. Freezing the system at state Gamma (both pools full, no
class-2 customers in pool 1) gives a process that equals in law the FTSP
with parameters (lambda^n / n, m^n / n) at the fluid state Gamma / n, with
time multiplied by n.
"""

from typing import Tuple

from fqrt_fluid.model.base import FluidState, ModelParams, ScaledInstance


def frozen_params(inst: ScaledInstance) -> ModelParams:
    """Get the fluid parameters of the frozen process of the n-th system,
    i.e., the model parameters with arrival rates and staffing levels replaced
    by the scaled integer values divided by n.

    Parameters
    ----------
    inst: fqrt_fluid.model.base.ScaledInstance
        Scaled instance.

    Returns
    -------
    fqrt_fluid.model.base.ModelParams
    """
    n = inst.n
    return inst.params.replace(
        lambda1=inst.lambda1_n / n,
        lambda2=inst.lambda2_n / n,
        m1=inst.m1_n / n,
        m2=inst.m2_n / n
    )


def frozen_as_ftsp(inst: ScaledInstance, Gamma) -> Tuple[FluidState, int]:
    """Get the fluid state Gamma / n together with the time-scale factor n
    of the FTSP that corresponds to the frozen process at Gamma.

    Parameters
    ----------
    inst: fqrt_fluid.model.base.ScaledInstance
        Scaled instance.
    Gamma: fqrt_fluid.ctmc.state.SystemState
        System state of the n-th system.

    Returns
    -------
    tuple of fqrt_fluid.model.base.FluidState and int
    """
    n = inst.n
    return FluidState(q1=Gamma.Q1 / n, q2=Gamma.Q2 / n, z12=Gamma.Z12 / n), n


def frozen_drift_pair(inst: ScaledInstance, Gamma) -> Tuple[float, float]:
    """Drift rates (delta_minus, delta_plus) of the frozen queue-difference
    process, evaluated directly at the unscaled system state.

    Parameters
    ----------
    inst: fqrt_fluid.model.base.ScaledInstance
        Scaled instance.
    Gamma: fqrt_fluid.ctmc.state.SystemState
        System state of the n-th system.

    Returns
    -------
    tuple of float
    """
    p = inst.params
    r = p.r
    swap = (p.mu22 - p.mu12) * Gamma.Z12 - p.mu22 * inst.m2_n
    base1 = inst.lambda1_n - p.mu11 * inst.m1_n - p.theta1 * Gamma.Q1
    delta_plus = (base1 + swap) - r * (inst.lambda2_n - p.theta2 * Gamma.Q2)
    delta_minus = base1 - r * (inst.lambda2_n + swap - p.theta2 * Gamma.Q2)
    return delta_minus, delta_plus
