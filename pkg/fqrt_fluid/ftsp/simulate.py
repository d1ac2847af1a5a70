# This file is part of the FQR-T fluid model toolkit (fqrt-fluid).
#
# Copyright (c) 2021-2022 New York University.
#
# fqrt-fluid is released under the Revised BSD License. See file LICENSE for
# full license details.

"""Event-by-event simulation of the fast-time-scale process on the integer
lattice (queue difference multiplied by the denominator k of r12).
"""

from __future__ import annotations
from dataclasses import dataclass
from typing import Optional, Tuple

import math

import numpy as np
import pandas as pd

from fqrt_fluid.ftsp.rates import ftsp_rates
from fqrt_fluid.model.base import FluidState, ModelParams
from fqrt_fluid.rng import RandomStream, Seed


@dataclass(frozen=True)
class FtspPath:
    """Piecewise-constant sample path of the FTSP. The value values[i] holds on
    the interval [times[i], times[i+1]) and the last value until the horizon.
    """
    times: np.ndarray
    values: np.ndarray
    horizon: float
    k: int

    def value_at(self, t: np.ndarray) -> np.ndarray:
        """Evaluate the right-continuous path at the given times."""
        idx = np.searchsorted(self.times, t, side='right') - 1
        return self.values[np.maximum(idx, 0)]

    def occupancy_positive(self, horizon: Optional[float] = None) -> float:
        """Fraction of the time in [0, horizon] that the path is strictly
        positive.
        """
        horizon = self.horizon if horizon is None else horizon
        return self._positive_time(0.0, horizon) / horizon

    def occupancy_batches(self, batches: int) -> Tuple[float, float]:
        """Batch-means estimate of the long-run fraction of time with a
        positive value and its standard error.

        Parameters
        ----------
        batches: int
            Number of batches of equal length.

        Returns
        -------
        tuple of float
        """
        width = self.horizon / batches
        means = np.array([
            self._positive_time(i * width, (i + 1) * width) / width for i in range(batches)
        ])
        return float(np.mean(means)), float(np.std(means, ddof=1) / math.sqrt(batches))

    def _positive_time(self, start: float, end: float) -> float:
        ends = np.append(self.times[1:], self.horizon)
        lower = np.maximum(self.times, start)
        upper = np.minimum(ends, end)
        length = np.maximum(upper - lower, 0.0)
        return float(np.sum(length[self.values > 0]))

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({'t': self.times, 'value': self.values})


def simulate_ftsp(
    gamma: FluidState, p: ModelParams, d0: int, horizon: float, seed: Seed,
    max_events: Optional[int] = None
) -> FtspPath:
    """Simulate the FTSP at a fixed fluid state over [0, horizon]. The path
    starts at lattice value d0 and jumps by +k, +j, -k and -j (r12 = j/k) at
    the side-dependent rates.

    Parameters
    ----------
    gamma: fqrt_fluid.model.base.FluidState
        Fluid state that determines the transition rates.
    p: fqrt_fluid.model.base.ModelParams
        Model parameters.
    d0: int
        Initial lattice value.
    horizon: float
        Length of the simulated time interval.
    seed: int or numpy.random.SeedSequence
        Seed for the random stream.
    max_events: int, default=None
        Optional bound on the number of simulated events.

    Returns
    -------
    fqrt_fluid.ftsp.simulate.FtspPath
    """
    rates = ftsp_rates(gamma, p)
    j, k = p.r12.numerator, p.r12.denominator
    jumps = (k, j, -k, -j)
    sides = {False: rates.side(False), True: rates.side(True)}
    totals = {side: sum(r) for side, r in sides.items()}
    stream = RandomStream(seed)
    times, values = [0.0], [int(d0)]
    t, value = 0.0, int(d0)
    while max_events is None or len(times) <= max_events:
        positive = value > 0
        total = totals[positive]
        if total <= 0:
            break
        t += stream.exponential(total)
        if t > horizon:
            break
        u = stream.uniform() * total
        for jump, rate in zip(jumps, sides[positive]):
            if u < rate:
                break
            u -= rate
        value += jump
        times.append(t)
        values.append(value)
    return FtspPath(
        times=np.array(times),
        values=np.array(values, dtype=np.int64),
        horizon=horizon,
        k=k
    )
