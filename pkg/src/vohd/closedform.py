"""Exact derivatives of log-power functions.

For ``x(t) = (ln(t/a))^g`` (left) and ``x(t) = (ln(b/t))^g`` (right), with
``L`` the corresponding logarithm,

    type 1:  G1 L^(g-alpha)
    type 2:  G1 L^(g-alpha) -+ t alpha' G2 L^(g+1-alpha) [ln L + psi(1-alpha) - psi(g+2-alpha)]
    type 3:  G1 L^(g-alpha) -+ t alpha' G2 L^(g+1-alpha) [ln L - psi(g+2-alpha)]

where ``G1 = Gamma(g+1)/Gamma(g+1-alpha)``, ``G2 = Gamma(g+1)/Gamma(g+2-alpha)``
and the correction carries ``-`` on the left and ``+`` on the right.

For ``g - alpha < 0`` the type-1 value blows up as ``L -> 0``; the formulas
stay valid pointwise for ``L > 0``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from vohd.errors import DomainError
from vohd.expr import OrderFunction, parse
from vohd.specfun import gamma, vdigamma, vgamma

__all__ = ["LogPowerSpec", "exact_log_power", "section4_exact", "section4_order"]


@dataclass(frozen=True)
class LogPowerSpec:
    side: str
    gamma: float
    a: float
    b: float

    def __post_init__(self) -> None:
        if self.side not in ("left", "right"):
            raise ValueError(f"side must be 'left' or 'right', got {self.side!r}")
        if not self.gamma > 0:
            raise DomainError("log-power exponent must be positive")
        if not 0 < self.a < self.b:
            raise DomainError("interval requires 0 < a < b")


def _log_distance(spec: LogPowerSpec, t: np.ndarray) -> np.ndarray:
    if spec.side == "left":
        if np.any(t <= spec.a) or np.any(t > spec.b):
            raise DomainError(f"left log-power needs {spec.a} < t <= {spec.b}")
        return np.log(t / spec.a)
    if np.any(t >= spec.b) or np.any(t < spec.a):
        raise DomainError(f"right log-power needs {spec.a} <= t < {spec.b}")
    return np.log(spec.b / t)


def exact_log_power(spec: LogPowerSpec, type: int, order: OrderFunction, t):
    """Closed-form type-1/2/3 derivative of the log-power ``spec`` at ``t``."""
    if type not in (1, 2, 3):
        raise ValueError(f"type must be 1, 2 or 3, got {type!r}")
    scalar = np.ndim(t) == 0
    t = np.atleast_1d(np.asarray(t, dtype=float))
    L = _log_distance(spec, t)
    alpha = order.check(t)
    g = spec.gamma

    g1 = gamma(g + 1.0)
    value = g1 / vgamma(g + 1.0 - alpha) * L ** (g - alpha)
    if type > 1:
        dalpha = order.derivative(t)
        bracket = np.log(L) - vdigamma(g + 2.0 - alpha)
        if type == 2:
            bracket = bracket + vdigamma(1.0 - alpha)
        correction = t * dalpha * g1 / vgamma(g + 2.0 - alpha) * L ** (g + 1.0 - alpha) * bracket
        # alpha' = 0 kills the term even where ln L is not finite
        correction = np.where(dalpha == 0.0, 0.0, correction)
        value = value - correction if spec.side == "left" else value + correction

    return float(value[0]) if scalar else value


def section4_order() -> OrderFunction:
    """The order alpha(t) = t/20 on [1, 5]."""
    return OrderFunction(parse("t/20"), 1.0, 5.0, source="t/20")


_SECTION4 = {
    "lnt-left": LogPowerSpec("left", 1.0, 1.0, 5.0),
    "ln5t-right": LogPowerSpec("right", 1.0, 1.0, 5.0),
}


def section4_exact(which: str, type: int, t):
    """Exact derivatives of ``ln t`` (left) or ``ln(5/t)`` (right) on [1, 5]
    with ``alpha(t) = t/20``."""
    try:
        spec = _SECTION4[which]
    except KeyError:
        raise ValueError(f"unknown scenario {which!r}; expected one of {sorted(_SECTION4)}") from None
    return exact_log_power(spec, type, section4_order(), t)
