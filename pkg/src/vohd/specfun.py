"""Real special functions: gamma, log-gamma, digamma, beta and rising products.

Everything here is scalar and dependency-free. The array helpers at the end
wrap the scalar routines with :func:`numpy.vectorize` for callers that work
on grids.
"""

from __future__ import annotations

import math

import numpy as np

from vohd.errors import DomainError, PoleError

__all__ = [
    "beta",
    "digamma",
    "gamma",
    "gamma_ratio",
    "ln_gamma",
    "rising",
    "vdigamma",
    "vgamma",
]

# Lanczos approximation, g = 7, nine terms
_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_SQRT_2PI = math.sqrt(2.0 * math.pi)
_HALF_LN_2PI = 0.5 * math.log(2.0 * math.pi)

_GAMMA_MAX_ARG = 171.6

# Bernoulli-number coefficients B_{2k} / (2k) for the digamma asymptotic series
_DIGAMMA_ASYMPTOTIC = (
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
    -3617.0 / 8160.0,
    43867.0 / 14364.0,
    -174611.0 / 6600.0,
    854513.0 / 3036.0,
)

# B_{2k} / (2k (2k - 1)) for the Stirling series of ln Gamma
_STIRLING = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
)


def _is_nonpositive_integer(x: float) -> bool:
    return x <= 0.0 and x == math.floor(x)


def _sinpi(x: float) -> float:
    """sin(pi x) with the argument reduced exactly before scaling."""
    r = math.fmod(x, 2.0)
    if r > 1.0:
        r -= 2.0
    elif r < -1.0:
        r += 2.0
    if r > 0.5:
        r = 1.0 - r
    elif r < -0.5:
        r = -1.0 - r
    return math.sin(math.pi * r)


def _lanczos_sum(z: float) -> float:
    # z = x - 1, x >= 0.5
    acc = _LANCZOS[0]
    for i in range(1, len(_LANCZOS)):
        acc += _LANCZOS[i] / (z + i)
    return acc


def gamma(x: float) -> float:
    """Gamma function for real ``x``.

    Negative non-integers go through the reflection formula. Raises
    :class:`PoleError` at 0, -1, -2, ... and :class:`OverflowError` once the
    result leaves double range (``x > 171.6``).
    """
    x = float(x)
    if math.isnan(x):
        return math.nan
    if _is_nonpositive_integer(x):
        raise PoleError(f"gamma has a pole at {x!r}")
    if x > _GAMMA_MAX_ARG:
        raise OverflowError(f"gamma({x!r}) overflows")
    if x < 0.5:
        return math.pi / (_sinpi(x) * gamma(1.0 - x))
    if x == math.floor(x) and x <= 23.0:
        return float(math.factorial(int(x) - 1))
    if x >= 15.0:
        # Stirling; the power is split so x**(x-0.5) cannot overflow alone
        half = x ** (0.5 * (x - 0.5))
        return _SQRT_2PI * half * math.exp(-x) * half * math.exp(_stirling_series(x))
    z = x - 1.0
    t = z + _LANCZOS_G + 0.5
    half = t ** (0.5 * (z + 0.5))
    return _SQRT_2PI * half * math.exp(-t) * half * _lanczos_sum(z)


def _stirling_series(x: float) -> float:
    inv = 1.0 / x
    inv2 = inv * inv
    series = 0.0
    power = inv
    for c in _STIRLING:
        series += c * power
        power *= inv2
    return series


def ln_gamma(x: float) -> float:
    """Natural log of Gamma for ``x > 0``."""
    x = float(x)
    if not x > 0.0:
        raise DomainError(f"ln_gamma requires x > 0, got {x!r}")
    if x == 1.0 or x == 2.0:
        return 0.0
    if x < 15.0:
        return math.log(gamma(x))
    return (x - 0.5) * math.log(x) - x + _HALF_LN_2PI + _stirling_series(x)


def digamma(x: float) -> float:
    """Digamma function psi = Gamma'/Gamma.

    Shifts the argument up to ``x >= 6`` with psi(x+1) = psi(x) + 1/x and
    sums the asymptotic series there; negative arguments use reflection.
    """
    x = float(x)
    if math.isnan(x):
        return math.nan
    if _is_nonpositive_integer(x):
        raise PoleError(f"digamma has a pole at {x!r}")
    if x < 0.0:
        # psi(x) = psi(1 - x) - pi cot(pi x)
        return digamma(1.0 - x) - math.pi * _cospi(x) / _sinpi(x)
    shift = 0.0
    while x < 6.0:
        shift -= 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    series = 0.0
    power = inv2
    for c in _DIGAMMA_ASYMPTOTIC:
        series += c * power
        power *= inv2
    return shift + math.log(x) - 0.5 / x - series


def _cospi(x: float) -> float:
    return _sinpi(x + 0.5)


def beta(p: float, q: float) -> float:
    """Beta function B(p, q) for positive arguments."""
    if not (p > 0.0 and q > 0.0):
        raise DomainError(f"beta requires p, q > 0, got ({p!r}, {q!r})")
    return math.exp(ln_gamma(p) + ln_gamma(q) - ln_gamma(p + q))


def rising(x: float, p: int) -> float:
    """Rising factorial x (x+1) ... (x+p-1); the empty product is 1."""
    if p < 0:
        raise DomainError(f"rising factorial needs p >= 0, got {p}")
    acc = 1.0
    for j in range(p):
        acc *= x + j
    return acc


def gamma_ratio(x: float, p: int) -> float:
    """Gamma(x + p) / Gamma(x) as a finite product.

    Valid for any finite ``x``, including arguments at or next to a pole of
    Gamma, where the quotient of two gamma evaluations would be meaningless.
    """
    return rising(float(x), int(p))


vgamma = np.vectorize(gamma, otypes=[float])
vdigamma = np.vectorize(digamma, otypes=[float])
