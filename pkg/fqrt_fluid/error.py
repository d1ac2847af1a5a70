# This file is part of the FQR-T fluid model toolkit (fqrt-fluid).
#
# Copyright (c) 2021-2022 New York University.
#
# fqrt-fluid is released under the Revised BSD License. See file LICENSE for
# full license details.

"""Exceptions that are raised by the fqrt-fluid package. Each exception class
carries a short error code that is used in reports and in messages of the
command-line interface.
"""

from typing import List, Optional


class FqrtError(Exception):
    """Base class for all errors raised by the package."""
    code = 'ERROR'

    def __init__(self, message: str):
        """Initialize the error message.

        Parameters
        ----------
        message: string
            Error message.
        """
        super(FqrtError, self).__init__(message)
        self.message = message

    def __str__(self) -> str:
        return '{}: {}'.format(self.code, self.message)


# -- Invalid input ------------------------------------------------------------

class InvalidParameterError(FqrtError, ValueError):
    """Error for model parameters, states or instances that are not valid.
    Optionally carries the list of violated conditions (e.g., the report of
    the overload check).
    """
    code = 'INVALID_PARAMETER'

    def __init__(self, message: str, violations: Optional[List[str]] = None):
        """Initialize the error message and the list of violated conditions.

        Parameters
        ----------
        message: string
            Error message.
        violations: list of string, default=None
            Names of violated conditions.
        """
        super(InvalidParameterError, self).__init__(message)
        self.violations = violations if violations is not None else list()


class ConfigError(FqrtError, ValueError):
    """Error when reading or validating an experiment configuration file."""
    code = 'CONFIG_PARSE'

    def __init__(
        self, message: str, key: Optional[str] = None, path: Optional[str] = None
    ):
        """Initialize the error message, the offending configuration key, and
        the path of the configuration file.

        Parameters
        ----------
        message: string
            Error message.
        key: string, default=None
            Dotted name of the offending key.
        path: string, default=None
            Path to the configuration file.
        """
        if path is not None:
            message = '{} ({})'.format(message, path)
        super(ConfigError, self).__init__(message)
        self.key = key
        self.path = path


class IllegalStateError(FqrtError, ValueError):
    """Error for a system state that violates the capacity or sharing rules
    of the scaled instance.
    """
    code = 'ILLEGAL_STATE'


class NotInAError(FqrtError, ValueError):
    """Error raised when an experiment requires a fluid state in the set of
    states where the fast-time-scale process is positive recurrent.
    """
    code = 'NOT_IN_A'


class StepTooLargeError(FqrtError, ValueError):
    """Error raised by the ODE integrator if the step size is too large for
    the forward Euler scheme.
    """
    code = 'STEP_TOO_LARGE'


# -- Numerical failures -------------------------------------------------------

class NonConvergenceError(FqrtError, ArithmeticError):
    """Error raised if an iterative solver does not reach the requested
    tolerance within the maximum number of iterations.
    """
    code = 'NON_CONVERGED'

    def __init__(self, message: str, iterations: int, residual: float):
        """Initialize the error message and the solver diagnostics.

        Parameters
        ----------
        message: string
            Error message.
        iterations: int
            Number of iterations that were performed.
        residual: float
            Residual of the last iterate.
        """
        super(NonConvergenceError, self).__init__(message)
        self.iterations = iterations
        self.residual = residual


class SingularBoundaryError(FqrtError, ArithmeticError):
    """Error raised if the boundary equations of a QBD process are singular
    or too ill-conditioned to be solved.
    """
    code = 'SINGULAR_BOUNDARY'


class DriftTestMismatchError(FqrtError, ArithmeticError):
    """Error raised if the closed-form drift criterion and the mean-drift
    test on the QBD blocks disagree.
    """
    code = 'DRIFT_TEST_MISMATCH'
