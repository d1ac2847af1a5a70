# This file is part of the FQR-T fluid model toolkit (fqrt-fluid).
#
# Copyright (c) 2021-2022 New York University.
#
# fqrt-fluid is released under the Revised BSD License. See file LICENSE for
# full license details.

"""Step distribution functions and the Levy distance between them."""

from __future__ import annotations
from dataclasses import dataclass
from typing import Optional

import numpy as np

from fqrt_fluid.ftsp.distribution import FtspDistribution


"""Number of bisection steps for the Levy distance."""
LEVY_ITERATIONS = 60


@dataclass(frozen=True)
class StepCdf:
    """Right-continuous step distribution function. The value at each jump
    point includes the mass of that point. The function may be defective:
    lower is the mass at minus infinity and 1 - cumulative[-1] the mass at
    plus infinity.
    """
    points: np.ndarray
    cumulative: np.ndarray
    lower: float = 0.0

    def __call__(self, x: np.ndarray) -> np.ndarray:
        """Evaluate the distribution function at the given values."""
        x = np.asarray(x, dtype=float)
        idx = np.searchsorted(self.points, x, side='right') - 1
        values = self.cumulative[np.maximum(idx, 0)]
        return np.where(idx < 0, self.lower, values)

    @property
    def upper(self) -> float:
        """Value of the function at plus infinity."""
        return float(self.cumulative[-1]) if len(self.cumulative) else self.lower


def empirical_cdf(samples: np.ndarray) -> StepCdf:
    """Empirical distribution function of a non-empty sample.

    Parameters
    ----------
    samples: numpy.ndarray
        Sample values.

    Returns
    -------
    fqrt_fluid.harness.metrics.StepCdf
    """
    values, counts = np.unique(np.asarray(samples, dtype=float), return_counts=True)
    if len(values) == 0:
        raise ValueError('empty sample')
    return StepCdf(points=values, cumulative=np.cumsum(counts) / np.sum(counts))


def cdf_from_distribution(distribution: FtspDistribution) -> StepCdf:
    """Distribution function of an FTSP stationary law on the original
    queue-difference scale (lattice values divided by k).

    Parameters
    ----------
    distribution: fqrt_fluid.ftsp.distribution.FtspDistribution
        Lattice distribution.

    Returns
    -------
    fqrt_fluid.harness.metrics.StepCdf
    """
    return StepCdf(
        points=distribution.differences().astype(float),
        cumulative=np.minimum(np.cumsum(distribution.mass), 1.0)
    )


def _levy_holds(F1: StepCdf, F2: StepCdf, eps: float) -> bool:
    """Test F1(x - eps) - eps <= F2(x) <= F1(x + eps) + eps at every point
    where one of the differences can attain its supremum.
    """
    x = np.concatenate([F1.points - eps, F1.points, F1.points + eps, F2.points])
    tol = 1e-15
    lower_ok = np.all(F1(x - eps) - eps <= F2(x) + tol)
    upper_ok = np.all(F2(x) <= F1(x + eps) + eps + tol)
    # Limits at minus and plus infinity.
    tails_ok = (
        F1.lower - eps <= F2.lower + tol and F2.lower <= F1.lower + eps + tol
        and F1.upper - eps <= F2.upper + tol and F2.upper <= F1.upper + eps + tol
    )
    return bool(lower_ok and upper_ok and tails_ok)


def levy_distance(
    F1: StepCdf, F2: StepCdf, iterations: Optional[int] = LEVY_ITERATIONS
) -> float:
    """Levy distance inf{eps > 0: F1(x - eps) - eps <= F2(x) <= F1(x + eps)
    + eps for all x} between two (possibly defective) step distribution
    functions. The condition is checked exactly on the merged jump sets and
    the infimum is located by bisection on [0, 1].

    Parameters
    ----------
    F1: fqrt_fluid.harness.metrics.StepCdf
        First distribution function.
    F2: fqrt_fluid.harness.metrics.StepCdf
        Second distribution function.
    iterations: int, default=60
        Number of bisection steps.

    Returns
    -------
    float
    """
    if _levy_holds(F1, F2, 0.0):
        return 0.0
    low, high = 0.0, 1.0
    for _ in range(iterations):
        mid = 0.5 * (low + high)
        if _levy_holds(F1, F2, mid):
            high = mid
        else:
            low = mid
    return high
