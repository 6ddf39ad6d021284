"""Direct numerical evaluation of the six variable-order operators.

All integrals are taken in the logarithmic distance ``u = ln(t/tau)`` (left)
or ``u = ln(tau/t)`` (right), which turns the kernel into ``u^(-alpha)``
times a smooth factor on ``[0, U]``, ``U = ln(t/a)`` or ``ln(b/t)``. Since
``x'(tau) dtau = x_1(tau) du`` with ``x_1 = tau x'``, the type-1 operator is

    left:   (1/Gamma(1-alpha)) int_0^U u^(-alpha) x_1(t e^(-u)) du
    right: -(1/Gamma(1-alpha)) int_0^U u^(-alpha) x_1(t e^(u)) du

Types 2 and 3 are reached through the relations

    type2 = type1 + t alpha'/Gamma(2-alpha) int_0^U u^(1-alpha) (1/(1-alpha) - ln u) x_1 du
    type3 = type2 +- t alpha' psi(1-alpha)/Gamma(1-alpha) int_0^U u^(-alpha) (x(tau) - x(e)) du

(``+`` and ``e = a`` on the left, ``-`` and ``e = b`` on the right), so no
derivative with respect to ``t`` is ever approximated.

Integrals against ``x_1`` are split at ``U/2``; on the half that touches
the far endpoint the integral is integrated by parts so that only
``x(tau) - x(e)`` is needed there. That keeps functions whose derivative is
singular at the endpoint (e.g. ``(ln(t/a))^(1/2)``) within reach.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from vohd.errors import DomainError
from vohd.expr import FunctionModel, OrderFunction
from vohd.quadrature import QuadratureConfig, tanh_sinh
from vohd.specfun import vdigamma, vgamma

__all__ = ["QuadratureConfig", "correction_12", "correction_23", "evaluate", "type1"]

Kernel = Callable[[np.ndarray, np.ndarray], np.ndarray]


class _Setup:
    def __init__(self, side: str, x: FunctionModel, order: OrderFunction, t) -> None:
        if side not in ("left", "right"):
            raise ValueError(f"side must be 'left' or 'right', got {side!r}")
        self.scalar = np.ndim(t) == 0
        t = np.atleast_1d(np.asarray(t, dtype=float))
        a, b = x.a, x.b
        if side == "left":
            if np.any(t <= a) or np.any(t > b):
                raise DomainError(f"left operator needs {a} < t <= {b}")
            self.U = np.log(t / a)
            self.end = a
            self.sign = -1.0
        else:
            if np.any(t < a) or np.any(t >= b):
                raise DomainError(f"right operator needs {a} <= t < {b}")
            self.U = np.log(b / t)
            self.end = b
            self.sign = 1.0
        self.side = side
        self.t = t
        self.x = x
        self.alpha = order.check(t)
        self.dalpha = order.derivative(t)
        self.x_end = float(x.value(self.end))

    def tau_near(self, u: np.ndarray) -> np.ndarray:
        # u measured from t
        return self.t[:, None] * np.exp(self.sign * u)

    def tau_far(self, d: np.ndarray) -> np.ndarray:
        # d measured from the far endpoint
        return self.end * np.exp(-self.sign * d)

    def finish(self, value: np.ndarray):
        return float(value[0]) if self.scalar else value


def _against_x1(s: _Setup, kernel: Kernel, dkernel: Kernel, alpha: np.ndarray,
                cfg: QuadratureConfig) -> np.ndarray:
    """int_0^U k(u) x_1(tau(u)) du, split at U/2 with the far half by parts."""
    U = s.U
    mid = 0.5 * U
    al = alpha[:, None]

    def near(dlo, dhi):
        return kernel(dlo, al) * s.x.x1(s.tau_near(dlo))

    def far(dlo, dhi):
        u = mid[:, None] + dlo
        return dkernel(u, al) * (s.x.value(s.tau_far(dhi)) - s.x_end)

    zero = np.zeros_like(U)
    first = tanh_sinh(near, zero, mid, cfg, where=s.t)
    tail = tanh_sinh(far, mid, U, cfg, where=s.t)
    boundary = kernel(mid, alpha) * (s.x.value(s.tau_near(mid[:, None]))[:, 0] - s.x_end)
    # d/du x(tau(u)) = sign * x_1, hence the by-parts form below
    return first + s.sign * (-boundary - tail)


def _power_kernel(u, alpha):
    return u ** (-alpha)


def _power_kernel_du(u, alpha):
    return -alpha * u ** (-alpha - 1.0)


def _log_kernel(u, alpha):
    return u ** (1.0 - alpha) * (1.0 / (1.0 - alpha) - np.log(u))


def _log_kernel_du(u, alpha):
    return -(1.0 - alpha) * u ** (-alpha) * np.log(u)


def _type1(s: _Setup, cfg: QuadratureConfig) -> np.ndarray:
    integral = _against_x1(s, _power_kernel, _power_kernel_du, s.alpha, cfg)
    sign = 1.0 if s.side == "left" else -1.0
    return sign * integral / vgamma(1.0 - s.alpha)


def _correction_12(s: _Setup, cfg: QuadratureConfig) -> np.ndarray:
    out = np.zeros_like(s.t)
    active = s.dalpha != 0.0
    if not np.any(active):
        return out
    sub = _subset(s, active)
    integral = _against_x1(sub, _log_kernel, _log_kernel_du, sub.alpha, cfg)
    out[active] = sub.t * sub.dalpha / vgamma(2.0 - sub.alpha) * integral
    return out


def _correction_23(s: _Setup, cfg: QuadratureConfig) -> np.ndarray:
    out = np.zeros_like(s.t)
    active = s.dalpha != 0.0
    if not np.any(active):
        return out
    sub = _subset(s, active)
    al = sub.alpha[:, None]
    U = sub.U

    def integrand(dlo, dhi):
        tau = np.where(dlo <= dhi, sub.tau_near(dlo), sub.tau_far(dhi))
        return dlo ** (-al) * (sub.x.value(tau) - sub.x_end)

    integral = tanh_sinh(integrand, np.zeros_like(U), U, cfg, where=sub.t)
    sign = 1.0 if s.side == "left" else -1.0
    out[active] = sign * sub.t * sub.dalpha * vdigamma(1.0 - sub.alpha) \
        / vgamma(1.0 - sub.alpha) * integral
    return out


def _subset(s: _Setup, mask: np.ndarray) -> _Setup:
    sub = object.__new__(_Setup)
    sub.__dict__.update(s.__dict__)
    for name in ("t", "U", "alpha", "dalpha"):
        setattr(sub, name, getattr(s, name)[mask])
    return sub


def type1(side: str, x: FunctionModel, order: OrderFunction, t,
          cfg: QuadratureConfig = QuadratureConfig()):
    """Type-1 operator: the order sits inside the integral only."""
    s = _Setup(side, x, order, t)
    return s.finish(_type1(s, cfg))


def correction_12(side: str, x: FunctionModel, order: OrderFunction, t,
                  cfg: QuadratureConfig = QuadratureConfig()):
    """Type 2 minus type 1. Zero wherever ``alpha' = 0``."""
    s = _Setup(side, x, order, t)
    return s.finish(_correction_12(s, cfg))


def correction_23(side: str, x: FunctionModel, order: OrderFunction, t,
                  cfg: QuadratureConfig = QuadratureConfig()):
    """Type 3 minus type 2, with the side-dependent sign included."""
    s = _Setup(side, x, order, t)
    return s.finish(_correction_23(s, cfg))


def evaluate(side: str, type: int, x: FunctionModel, order: OrderFunction, t,
             cfg: QuadratureConfig = QuadratureConfig()):
    """Type-``type`` operator of ``x`` at ``t`` (scalar or array)."""
    if type not in (1, 2, 3):
        raise ValueError(f"type must be 1, 2 or 3, got {type!r}")
    s = _Setup(side, x, order, t)
    value = _type1(s, cfg)
    if type >= 2:
        value = value + _correction_12(s, cfg)
    if type == 3:
        value = value + _correction_23(s, cfg)
    return s.finish(value)
