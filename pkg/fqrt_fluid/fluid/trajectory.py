# This file is part of the FQR-T fluid model toolkit (fqrt-fluid).
#
# Copyright (c) 2021-2022 New York University.
#
# fqrt-fluid is released under the Revised BSD License. See file LICENSE for
# full license details.

"""Trajectories of fluid (or fluid-scaled) states on a uniform time grid."""

from __future__ import annotations
from dataclasses import dataclass
from typing import Optional

import numpy as np
import pandas as pd

from fqrt_fluid.model.base import FluidState


"""Column names for trajectory data frames."""
COLUMNS = ['q1', 'q2', 'z12']
AUX_COLUMNS = ['z11', 'z21', 'z22']


@dataclass(frozen=True)
class Trajectory:
    """Sequence of states (q1, q2, z12) at times t0 + i * h. Trajectories
    of the ODE carry the value of pi_12 that was used at each grid point.
    Fluid-scaled sample paths carry the auxiliary coordinates (z11, z21,
    z22) instead.
    """
    t0: float
    h: float
    states: np.ndarray
    pi_values: Optional[np.ndarray] = None
    aux: Optional[np.ndarray] = None

    def __len__(self) -> int:
        return self.states.shape[0]

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.h * np.arange(len(self))

    def state(self, index: int) -> FluidState:
        """Get the fluid state at the grid point with the given index."""
        return FluidState(*[float(x) for x in self.states[index]])

    def final(self) -> FluidState:
        return self.state(len(self) - 1)

    def at(self, t: np.ndarray) -> np.ndarray:
        """Linear interpolation of the states at the given times. Returns an
        array with one row per time.
        """
        t = np.atleast_1d(np.asarray(t, dtype=float))
        times = self.times
        return np.column_stack([
            np.interp(t, times, self.states[:, i]) for i in range(self.states.shape[1])
        ])

    def distance_to(self, target: FluidState) -> np.ndarray:
        """L1 distance of each grid state to a target state."""
        return np.sum(np.abs(self.states - np.asarray(target, dtype=float)), axis=1)

    def to_frame(self) -> pd.DataFrame:
        """Get data frame with columns t, q1, q2, z12 and either pi or the
        auxiliary coordinates.
        """
        df = pd.DataFrame(self.states, columns=COLUMNS)
        df.insert(0, 't', self.times)
        if self.pi_values is not None:
            df['pi'] = self.pi_values
        if self.aux is not None:
            for i, col in enumerate(AUX_COLUMNS):
                df[col] = self.aux[:, i]
        return df
