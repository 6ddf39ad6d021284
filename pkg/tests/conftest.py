"""Shared test helpers.

``definitional`` evaluates the operators straight from their defining
integrals in multiprecision arithmetic, differentiating in ``t``
numerically. It shares no code with the package and serves as the
independent reference for the closed forms and the quadrature oracle.
"""

from __future__ import annotations

import mpmath

DPS = 30


def _inner(side, x, alpha, a, b, t):
    """int (ln-distance)^(-alpha) (x(tau) - x(end)) / tau dtau, in the log variable."""
    if side == "left":
        U = mpmath.log(t / a)
        end = x(a)
        return mpmath.quad(lambda u: u ** (-alpha) * (x(t * mpmath.exp(-u)) - end), [0, U])
    U = mpmath.log(b / t)
    end = x(b)
    return mpmath.quad(lambda u: u ** (-alpha) * (x(t * mpmath.exp(u)) - end), [0, U])


def definitional(side, type, x, dx, alpha, a, b, t):
    """Type-``type`` operator at ``t``.

    ``x``, its derivative ``dx`` and ``alpha`` take mpf arguments.
    """
    with mpmath.workdps(DPS):
        t = mpmath.mpf(t)
        a, b = mpmath.mpf(a), mpmath.mpf(b)
        sign = 1 if side == "left" else -1
        if type == 1:
            al = alpha(t)
            # x'(tau) dtau = tau x'(tau) du with tau = t e^(-+u)
            if side == "left":
                U = mpmath.log(t / a)
                tau = lambda u: t * mpmath.exp(-u)
            else:
                U = mpmath.log(b / t)
                tau = lambda u: t * mpmath.exp(u)
            integral = mpmath.quad(lambda u: u ** (-al) * dx(tau(u)) * tau(u), [0, U])
            value = integral / mpmath.gamma(1 - al)
            return float(sign * value)
        if type == 2:
            # d/dt of the integral with the order frozen in Gamma but not in the kernel
            slope = mpmath.diff(lambda s: _inner(side, x, alpha(s), a, b, s), t)
            return float(sign * t * slope / mpmath.gamma(1 - alpha(t)))
        slope = mpmath.diff(
            lambda s: _inner(side, x, alpha(s), a, b, s) / mpmath.gamma(1 - alpha(s)), t)
        return float(sign * t * slope)
