# This file is part of the FQR-T fluid model toolkit (fqrt-fluid).
#
# Copyright (c) 2021-2022 New York University.
#
# fqrt-fluid is released under the Revised BSD License. See file LICENSE for
# full license details.

"""Base types for the X-model under the FQR-T control: model parameters,
fluid states, derived steady-state quantities, state-space regions and the
scaled instances of the n-th system.
"""

from __future__ import annotations
from dataclasses import dataclass, fields
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, NamedTuple, Sequence, Union

from fqrt_fluid.error import InvalidParameterError


Ratio = Union[Fraction, int, str, Sequence[int]]


# -- Queue-ratio parameters ---------------------------------------------------

def parse_ratio(value: Ratio) -> Fraction:
    """Get an exact rational representation for a queue-ratio parameter. The
    value is either a Fraction, a positive integer, a string 'j/k' (or 'j'),
    or a pair of positive integers [j, k]. Floating-point values are rejected
    since the QBD lattice construction requires exact ratios.

    Parameters
    ----------
    value: fractions.Fraction, int, string, or list of int
        Ratio specification.

    Returns
    -------
    fractions.Fraction

    Raises
    ------
    fqrt_fluid.error.InvalidParameterError
    """
    if isinstance(value, bool) or isinstance(value, float):
        raise InvalidParameterError('ratio must be exact, got {}'.format(value))
    try:
        if isinstance(value, Fraction):
            ratio = value
        elif isinstance(value, int):
            ratio = Fraction(value)
        elif isinstance(value, str):
            tokens = value.strip().split('/')
            if len(tokens) == 1:
                ratio = Fraction(int(tokens[0]))
            elif len(tokens) == 2:
                ratio = Fraction(int(tokens[0]), int(tokens[1]))
            else:
                raise ValueError(value)
        else:
            j, k = value
            ratio = Fraction(int(j), int(k))
    except (TypeError, ValueError, ZeroDivisionError):
        raise InvalidParameterError('invalid ratio {}'.format(value))
    if ratio <= 0:
        raise InvalidParameterError('ratio must be positive, got {}'.format(value))
    return ratio


def format_ratio(ratio: Fraction) -> str:
    """Get string representation 'j/k' for a ratio in lowest terms."""
    return '{}/{}'.format(ratio.numerator, ratio.denominator)


# -- Model parameters ---------------------------------------------------------

"""Names of the rate and staffing parameters that have to be positive."""
POSITIVE_PARAMETERS = [
    'lambda1', 'lambda2', 'mu11', 'mu12', 'mu21', 'mu22', 'theta1', 'theta2',
    'm1', 'm2'
]


@dataclass(frozen=True)
class ModelParams:
    """Fluid-scale parameters of an X-model instance. Service rates mu_ij are
    for class i customers served by agents in pool j. The queue-ratio
    parameters are exact rationals. The threshold constants kappa12 and
    kappa21 are the fluid companions of the integer thresholds of the scaled
    instances.
    """
    lambda1: float
    lambda2: float
    mu11: float
    mu12: float
    mu21: float
    mu22: float
    theta1: float
    theta2: float
    m1: float
    m2: float
    r12: Fraction
    r21: Fraction
    kappa12: float
    kappa21: float

    def __post_init__(self):
        """Convert the ratio parameters and validate all parameter values.

        Raises
        ------
        fqrt_fluid.error.InvalidParameterError
        """
        object.__setattr__(self, 'r12', parse_ratio(self.r12))
        object.__setattr__(self, 'r21', parse_ratio(self.r21))
        for name in POSITIVE_PARAMETERS:
            value = getattr(self, name)
            if not value > 0:
                raise InvalidParameterError('{} must be positive, got {}'.format(name, value))
        for name in ['kappa12', 'kappa21']:
            if getattr(self, name) < 0:
                raise InvalidParameterError('{} must be nonnegative'.format(name))
        if self.r12 < self.r21:
            raise InvalidParameterError('r12={} < r21={}'.format(self.r12, self.r21))

    @property
    def r(self) -> float:
        """Shortcut for the floating-point value of the ratio r12."""
        return float(self.r12)

    def replace(self, **kwargs) -> ModelParams:
        """Get a copy of the parameters with the given values modified."""
        doc = {f.name: getattr(self, f.name) for f in fields(self)}
        doc.update(kwargs)
        return ModelParams(**doc)


def params_from_dict(doc: Dict[str, Any]) -> ModelParams:
    """Create model parameters from a flat dictionary whose keys are exactly
    the field names of ModelParams.

    Parameters
    ----------
    doc: dict
        Flat dictionary (e.g., a parsed TOML table).

    Returns
    -------
    fqrt_fluid.model.base.ModelParams

    Raises
    ------
    fqrt_fluid.error.InvalidParameterError
    """
    names = [f.name for f in fields(ModelParams)]
    unknown = sorted(set(doc) - set(names))
    if unknown:
        raise InvalidParameterError('unknown parameter(s) {}'.format(', '.join(unknown)))
    missing = [key for key in names if key not in doc]
    if missing:
        raise InvalidParameterError('missing parameter(s) {}'.format(', '.join(missing)))
    return ModelParams(**doc)


def params_to_dict(p: ModelParams) -> Dict[str, Any]:
    """Get flat dictionary serialization for a set of model parameters. The
    ratios are rendered as strings 'j/k'.

    Parameters
    ----------
    p: fqrt_fluid.model.base.ModelParams
        Model parameters.

    Returns
    -------
    dict
    """
    doc = dict()
    for f in fields(p):
        value = getattr(p, f.name)
        doc[f.name] = format_ratio(value) if isinstance(value, Fraction) else value
    return doc


# -- Fluid states -------------------------------------------------------------

class FluidState(NamedTuple):
    """Point gamma = (q1, q2, z12) in the fluid state space."""
    q1: float
    q2: float
    z12: float


def in_space(gamma: FluidState, p: ModelParams, atol: float = 0.0) -> bool:
    """Test whether a fluid state is in the state space [0, inf)^2 x [0, m2].

    Parameters
    ----------
    gamma: fqrt_fluid.model.base.FluidState
        Fluid state.
    p: fqrt_fluid.model.base.ModelParams
        Model parameters.
    atol: float, default=0
        Absolute tolerance for the bounds.

    Returns
    -------
    bool
    """
    q1, q2, z12 = gamma
    return q1 >= -atol and q2 >= -atol and -atol <= z12 <= p.m2 + atol


class DerivedQuantities(NamedTuple):
    """Traffic intensities, stand-alone fluid queue lengths and stand-alone
    fluid idleness for both classes.
    """
    rho1: float
    rho2: float
    qa1: float
    qa2: float
    sa1: float
    sa2: float


# -- Regions ------------------------------------------------------------------

class Region(Enum):
    """Regions of the fluid state space. The three boundary regions partition
    the switching surface q1 = r12 * q2 by the signs of the drift rates of the
    fast-time-scale process.
    """
    S_PLUS = 'S+'
    S_MINUS = 'S-'
    BOUNDARY_A = 'A'
    BOUNDARY_A_PLUS = 'A+'
    BOUNDARY_A_MINUS = 'A-'

    @property
    def label(self) -> str:
        return self.value


def region_label(region: Region) -> str:
    """Get the string rendering of a region."""
    return region.value


def parse_region(label: str) -> Region:
    """Get the region for a given string rendering.

    Raises
    ------
    fqrt_fluid.error.InvalidParameterError
    """
    try:
        return Region(label)
    except ValueError:
        raise InvalidParameterError('unknown region {}'.format(label))


# -- Scaled instances ---------------------------------------------------------

@dataclass(frozen=True)
class ScaledInstance:
    """Integer-valued parameters of the n-th system. The instance keeps a
    reference to the fluid parameters for the per-customer rates (service
    and abandonment rates are not scaled) and the queue ratios.
    """
    n: int
    lambda1_n: int
    lambda2_n: int
    m1_n: int
    m2_n: int
    k12_n: int
    k21_n: int
    c_n: float
    params: ModelParams
