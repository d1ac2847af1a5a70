# This file is part of the FQR-T fluid model toolkit (fqrt-fluid).
#
# Copyright (c) 2021-2022 New York University.
#
# fqrt-fluid is released under the Revised BSD License. See file LICENSE for
# full license details.

"""Transition rates of the fast-time-scale process (FTSP) at a fluid state.
The FTSP is a pure-jump process on the queue-difference scale with jumps +1
(class-1 queue increase), +r (class-2 queue decrease), -1 (class-1 queue
decrease) and -r (class-2 queue increase), and rates that only depend on the
sign of the current value.
"""

from __future__ import annotations
from typing import NamedTuple, Tuple

from fqrt_fluid.model.base import FluidState, ModelParams


class FtspRates(NamedTuple):
    """Rates for the jumps +1, +r, -1, -r on the nonpositive (minus) and on
    the positive (plus) side.
    """
    lam1_minus: float
    lamR_minus: float
    mu1_minus: float
    muR_minus: float
    lam1_plus: float
    lamR_plus: float
    mu1_plus: float
    muR_plus: float

    def side(self, positive: bool) -> Tuple[float, float, float, float]:
        """Get the four rates (lam1, lamR, mu1, muR) for one side."""
        if positive:
            return self.lam1_plus, self.lamR_plus, self.mu1_plus, self.muR_plus
        return self.lam1_minus, self.lamR_minus, self.mu1_minus, self.muR_minus

    def scale(self, c: float) -> FtspRates:
        """Multiply all rates by a common constant."""
        return FtspRates(*[c * x for x in self])

    def drifts(self, r: float) -> Tuple[float, float]:
        """Get the pair of drift rates (delta_minus, delta_plus) for the queue
        ratio r.
        """
        delta_minus = r * (self.lamR_minus - self.muR_minus) + (self.lam1_minus - self.mu1_minus)
        delta_plus = r * (self.lamR_plus - self.muR_plus) + (self.lam1_plus - self.mu1_plus)
        return delta_minus, delta_plus


def ftsp_rates(gamma: FluidState, p: ModelParams) -> FtspRates:
    """Evaluate the eight FTSP transition rates at a fluid state.

    Parameters
    ----------
    gamma: fqrt_fluid.model.base.FluidState
        Fluid state (q1, q2, z12).
    p: fqrt_fluid.model.base.ModelParams
        Model parameters.

    Returns
    -------
    fqrt_fluid.ftsp.rates.FtspRates
    """
    q1, q2, z12 = gamma
    # Total pool-2 service rate and the abandonment rates.
    pool2 = p.mu12 * z12 + p.mu22 * (p.m2 - z12)
    ab1 = p.theta1 * q1
    ab2 = p.theta2 * q2
    return FtspRates(
        lam1_minus=p.lambda1,
        lamR_minus=pool2 + ab2,
        mu1_minus=p.mu11 * p.m1 + ab1,
        muR_minus=p.lambda2,
        lam1_plus=p.lambda1,
        lamR_plus=ab2,
        mu1_plus=p.mu11 * p.m1 + pool2 + ab1,
        muR_plus=p.lambda2
    )
