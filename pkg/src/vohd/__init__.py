"""Variable-order Caputo-Hadamard fractional derivatives.

Three evaluation routes for the left and right operators of types 1-3:

* :mod:`vohd.closedform` -- exact values for log-power functions,
* :mod:`vohd.oracle` -- direct quadrature of the defining integrals,
* :mod:`vohd.expansion` -- truncated expansions in integer-order
  derivatives and moments, with error bounds.
"""

from __future__ import annotations

from vohd.closedform import LogPowerSpec, exact_log_power
from vohd.errors import (
    ConfigError,
    DepthError,
    DomainError,
    ExprSyntaxError,
    OrderRangeError,
    PoleError,
    QuadratureError,
    UnknownIdentifierError,
    VohdError,
)
from vohd.expansion import ApproxSpec, approximate, build_moments, error_bound
from vohd.expr import FunctionModel, OrderFunction, parse, x_sequence
from vohd.quadrature import QuadratureConfig

__version__ = "0.1.0"

__all__ = [
    "ApproxSpec",
    "ConfigError",
    "DepthError",
    "DomainError",
    "ExprSyntaxError",
    "FunctionModel",
    "LogPowerSpec",
    "OrderFunction",
    "OrderRangeError",
    "PoleError",
    "QuadratureConfig",
    "QuadratureError",
    "UnknownIdentifierError",
    "VohdError",
    "approximate",
    "build_moments",
    "error_bound",
    "exact_log_power",
    "parse",
    "x_sequence",
]
