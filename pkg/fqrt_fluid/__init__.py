# This file is part of the FQR-T fluid model toolkit (fqrt-fluid).
#
# Copyright (c) 2021-2022 New York University.
#
# fqrt-fluid is released under the Revised BSD License. See file LICENSE for
# full license details.

from fqrt_fluid.model.base import FluidState, ModelParams, Region  # noqa: F401
from fqrt_fluid.model.core import (  # noqa: F401
    classify_region, scaled_instance, stationary_point, validate_overload
)
from fqrt_fluid.ftsp.distribution import ftsp_stationary_distribution, pi_12  # noqa: F401
from fqrt_fluid.fluid.ode import integrate, ode_rhs  # noqa: F401
from fqrt_fluid.ctmc.simulate import simulate  # noqa: F401
from fqrt_fluid.version import __version__  # noqa: F401
