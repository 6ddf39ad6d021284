"""Approximation of the variable-order operators by integer-order terms.

With ``L = ln(t/a)`` (left) or ``L = ln(b/t)`` (right), the type-1 operator
is approximated by

    sum_{k=1}^{n} A_k L^(k-alpha) x_k(t) + sum_{k=n}^{N} B_k L^(n-k-alpha) V_{k-n}(t)

where ``x_k`` is the sequence ``x_1 = t x'``, ``x_{k+1} = t x_k'`` and the
moments are ``V_k(t) = int_a^t (ln(tau/a))^k x'(tau) dtau`` (left) or
``int_t^b (ln(b/tau))^k x'(tau) dtau`` (right). On the right ``A_k`` picks
up a factor ``(-1)^k`` and ``B_k`` flips sign. Types 2 and 3 add

    t alpha'/Gamma(2-alpha) L^(1-alpha) [ (c - ln L) sum_p C_p V_p / L^p
                                          + sum_p C_p sum_{r=1}^{N} V_{p+r} / (r L^(p+r)) ]

with ``C_p = (-1)^p binom(1-alpha, p)`` and ``c = 1/(1-alpha)`` (type 2) or
``c = psi(2-alpha)`` (type 3). Every gamma quotient whose arguments can sit
next to a pole is evaluated as a rising product.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from vohd.errors import DepthError, DomainError
from vohd.expr import FunctionModel, OrderFunction, log_jet, x_sequence
from vohd.quadrature import gauss_legendre
from vohd.specfun import digamma, gamma, rising, vdigamma, vgamma

__all__ = [
    "ApproxSpec",
    "MomentTable",
    "NOT_EVALUATED_GAP",
    "approx_right",
    "approx_type1",
    "approx_type2",
    "approx_type3",
    "approximate",
    "binomial_weights",
    "bound_stability",
    "build_moments",
    "coeff_A",
    "coeff_B",
    "error_bound",
    "interior_grid",
]

# types 2-3 are not evaluated closer than this to the base point
NOT_EVALUATED_GAP = 1.0e-6
GL_ORDER = 16


@dataclass(frozen=True)
class ApproxSpec:
    side: str
    type: int
    n: int
    N: int
    a: float
    b: float
    grid: tuple[float, ...]

    def __post_init__(self) -> None:
        if self.side not in ("left", "right"):
            raise ValueError(f"side must be 'left' or 'right', got {self.side!r}")
        if self.type not in (1, 2, 3):
            raise ValueError(f"type must be 1, 2 or 3, got {self.type!r}")
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if self.N < self.n:
            raise ValueError(f"N must satisfy N >= n (got N={self.N}, n={self.n})")
        if not 0 < self.a < self.b:
            raise DomainError("interval requires 0 < a < b")
        g = np.asarray(self.grid, dtype=float)
        if g.ndim != 1 or g.size == 0:
            raise ValueError("grid must be a non-empty sequence")
        if np.any(np.diff(g) <= 0):
            raise ValueError("grid must be strictly increasing")
        if self.side == "left" and (g[0] <= self.a or g[-1] > self.b):
            raise DomainError(f"left grid must lie in ({self.a}, {self.b}]")
        if self.side == "right" and (g[0] < self.a or g[-1] >= self.b):
            raise DomainError(f"right grid must lie in [{self.a}, {self.b})")

    @property
    def t(self) -> np.ndarray:
        return np.asarray(self.grid, dtype=float)

    def log_distance(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return np.log(t / self.a) if self.side == "left" else np.log(self.b / t)


def interior_grid(side: str, a: float, b: float, count: int) -> tuple[float, ...]:
    """``count`` equispaced points excluding the base point of ``side``.

    Left: ``a + (b-a) i/count`` for ``i = 1..count``; right: ``i = 0..count-1``.
    """
    if count < 1:
        raise ValueError("grid needs at least one point")
    i = np.arange(1, count + 1) if side == "left" else np.arange(count)
    return tuple(float(v) for v in a + (b - a) * i / count)


# {{{ coefficients


def coeff_A(k: int, n: int, N: int, alpha: float) -> float:
    """A_k for 1 <= k <= n <= N; the right-side value is ``(-1)^k`` times this."""
    if not 1 <= k <= n <= N:
        raise ValueError(f"need 1 <= k <= n <= N, got k={k}, n={n}, N={N}")
    # Gamma(alpha-n+p) / (Gamma(alpha-k) (p-n+k)!) with j = p-n+k = 1 .. N-n+k
    bracket = 1.0
    term = 1.0
    for j in range(1, N - n + k + 1):
        term *= (alpha - k + j - 1) / j
        bracket += term
    return bracket / gamma(k + 1 - alpha)


def coeff_B(k: int, n: int, alpha: float) -> float:
    """B_k for k >= n; the right-side value is its negative."""
    if k < n:
        raise ValueError(f"need k >= n, got k={k}, n={n}")
    m = k - n
    return rising(alpha, m) / (math.factorial(m) * gamma(1.0 - alpha))


def binomial_weights(alpha, N: int) -> np.ndarray:
    """``(-1)^p binom(1-alpha, p)`` for ``p = 0..N``, stacked along axis 0."""
    alpha = np.asarray(alpha, dtype=float)
    out = np.empty((N + 1,) + alpha.shape)
    out[0] = 1.0
    for p in range(1, N + 1):
        out[p] = out[p - 1] * (alpha - 2.0 + p) / p
    return out


def _coeff_A_array(k: int, n: int, N: int, alpha: np.ndarray) -> np.ndarray:
    bracket = np.ones_like(alpha)
    term = np.ones_like(alpha)
    for j in range(1, N - n + k + 1):
        term = term * (alpha - k + j - 1) / j
        bracket = bracket + term
    return bracket / vgamma(k + 1 - alpha)


def _coeff_B_array(n: int, N: int, alpha: np.ndarray) -> np.ndarray:
    """B_k for k = n..N, stacked along axis 0."""
    out = np.empty((N - n + 1,) + alpha.shape)
    out[0] = 1.0 / vgamma(1.0 - alpha)
    for m in range(1, N - n + 1):
        out[m] = out[m - 1] * (alpha + m - 1) / m
    return out

# }}}

# {{{ moments


@dataclass(frozen=True)
class MomentTable:
    """``values[k, i]`` is V_k (left) or the right moment at ``grid[i]``."""

    side: str
    a: float
    b: float
    grid: tuple[float, ...]
    values: np.ndarray

    @property
    def depth(self) -> int:
        return self.values.shape[0] - 1


def build_moments(x: FunctionModel, spec: ApproxSpec, depth: int | None = None) -> MomentTable:
    """Moments up to ``depth`` (default ``2 N``) on the grid of ``spec``.

    The integrals are accumulated cell by cell along the grid, starting at
    the base point. Each cell is mapped to the logarithmic variable (where
    ``x'(tau) dtau = x_1 ds``), split into ``ceil(depth/8)`` pieces, and
    integrated with 16-point Gauss-Legendre.
    """
    K = 2 * spec.N if depth is None else depth
    t = spec.t
    if spec.side == "left":
        s_grid = spec.log_distance(t)
        order = np.arange(t.size)
        base = spec.a
        direction = 1.0
    else:
        order = np.arange(t.size)[::-1]
        s_grid = spec.log_distance(t[order])
        base = spec.b
        direction = -1.0

    edges = np.concatenate([[0.0], s_grid])
    pieces = max(1, math.ceil(K / 8))
    frac = np.linspace(0.0, 1.0, pieces + 1)
    lo = (edges[:-1, None] + np.diff(edges)[:, None] * frac[:-1]).ravel()
    hi = (edges[:-1, None] + np.diff(edges)[:, None] * frac[1:]).ravel()

    nodes, weights = gauss_legendre(GL_ORDER)
    half = 0.5 * (hi - lo)
    s = (0.5 * (hi + lo))[:, None] + half[:, None] * nodes
    w = half[:, None] * weights

    x1 = x.x1(base * np.exp(direction * s))
    # x'(tau) dtau = x_1 ds on the left; on the right dtau = -tau ds and the
    # reversed limits cancel the sign, so both sides are int_0^L s^k x_1 ds
    f = x1 * w
    powers = np.empty((K + 1,) + s.shape)
    powers[0] = 1.0
    for k in range(1, K + 1):
        powers[k] = powers[k - 1] * s
    per_piece = np.einsum("kpq,pq->kp", powers, f)
    per_cell = per_piece.reshape(K + 1, t.size, pieces).sum(axis=2)
    values = np.cumsum(per_cell, axis=1)
    if spec.side == "right":
        values = values[:, ::-1]
    return MomentTable(spec.side, spec.a, spec.b, spec.grid, values)

# }}}

# {{{ approximations


def _evaluate(x: FunctionModel, order: OrderFunction, spec: ApproxSpec,
              moments: MomentTable, index: np.ndarray, type: int) -> np.ndarray:
    if moments.side != spec.side:
        raise ValueError("moment table was built for the other side")
    need = 2 * spec.N if type > 1 else spec.N - spec.n
    if moments.depth < need:
        raise DepthError(f"moment table has depth {moments.depth}, need {need}")
    n, N = spec.n, spec.N
    t = spec.t[index]
    L = spec.log_distance(t)
    if np.any(L <= 0):
        raise DomainError("the expansion is undefined at the base point")
    alpha = order.check(t)
    V = moments.values[:, index]
    # W_j = V_j / L^j
    scale = np.cumprod(np.vstack([np.ones_like(L), np.broadcast_to(1.0 / L, (V.shape[0] - 1, L.size))]), axis=0)
    W = V * scale

    right = spec.side == "right"
    xs = x_sequence(x, t, n)
    value = np.zeros_like(t)
    for k in range(1, n + 1):
        A = _coeff_A_array(k, n, N, alpha)
        if right and k % 2:
            A = -A
        value = value + A * L ** (k - alpha) * xs[k - 1]
    B = _coeff_B_array(n, N, alpha)
    if right:
        B = -B
    value = value + L ** (-alpha) * np.sum(B * W[: N - n + 1], axis=0)

    if type == 1:
        return value

    dalpha = order.derivative(t)
    C = binomial_weights(alpha, N)
    c = 1.0 / (1.0 - alpha) if type == 2 else vdigamma(2.0 - alpha)
    with np.errstate(divide="ignore", invalid="ignore"):
        lnL = np.log(L)
        single = np.sum(C * W[: N + 1], axis=0)
        r = np.arange(1, N + 1)[:, None]
        double = np.zeros_like(t)
        for p in range(N + 1):
            double = double + C[p] * np.sum(W[p + 1: p + N + 1] / r, axis=0)
        block = t * dalpha / vgamma(2.0 - alpha) * L ** (1.0 - alpha) \
            * ((c - lnL) * single + double)
    block = np.where(dalpha == 0.0, 0.0, block)
    value = value + block
    gap = (t - spec.a) if spec.side == "left" else (spec.b - t)
    return np.where(gap < NOT_EVALUATED_GAP, np.nan, value)


def approximate(x: FunctionModel, order: OrderFunction, spec: ApproxSpec,
                moments: MomentTable) -> np.ndarray:
    """The type-``spec.type`` approximation at every grid point.

    Types 2-3 report NaN ("not evaluated") within ``NOT_EVALUATED_GAP`` of
    the base point.
    """
    index = np.arange(len(spec.grid))
    return _evaluate(x, order, spec, moments, index, spec.type)


def _point(x, order, spec, moments, t_index: int, type: int) -> float:
    return float(_evaluate(x, order, spec, moments, np.array([t_index]), type)[0])


def approx_type1(x: FunctionModel, order: OrderFunction, spec: ApproxSpec,
                 moments: MomentTable, t_index: int) -> float:
    return _point(x, order, spec, moments, t_index, 1)


def approx_type2(x: FunctionModel, order: OrderFunction, spec: ApproxSpec,
                 moments: MomentTable, t_index: int) -> float:
    return _point(x, order, spec, moments, t_index, 2)


def approx_type3(x: FunctionModel, order: OrderFunction, spec: ApproxSpec,
                 moments: MomentTable, t_index: int) -> float:
    return _point(x, order, spec, moments, t_index, 3)


def approx_right(type: int, x: FunctionModel, order: OrderFunction, spec: ApproxSpec,
                 moments: MomentTable, t_index: int) -> float:
    """Right-sided approximation; ``spec.side`` must be ``"right"``."""
    if spec.side != "right":
        raise ValueError("approx_right needs a right-sided ApproxSpec")
    return _point(x, order, spec, moments, t_index, type)

# }}}

# {{{ error bounds


def _max_abs(values: np.ndarray) -> float:
    return float(np.max(np.abs(values)))


def error_bound(type: int, x: FunctionModel, order: OrderFunction, spec: ApproxSpec,
                t: float, samples: int = 256, literal: bool = False) -> float:
    """Theoretical truncation-error bound at ``t``.

    The type-1 part is

        w exp((n-alpha)^2 + n - alpha) / (Gamma(n+1-alpha) N^(n-alpha) (n-alpha))
            L^(n-alpha) max |x_n'|

    with ``w = t - a`` (left) or ``b - t`` (right). Types 2-3 add

        w t |alpha'| exp((1-alpha)^2 + 1 - alpha) / (Gamma(2-alpha) N^(1-alpha) (1-alpha))
            L^(1-alpha) max |x'| |c - ln L + R L / N|

    with ``c`` as in the approximation and ``R = 2t - a`` (left) or ``b``
    (right). Maxima are estimated from ``samples`` equispaced points of the
    interval between the base point and ``t``.

    By default the derivative in the first term is ``x_n'``, the quantity
    the remainder integral actually contains. ``literal=True`` uses
    ``x_N'`` instead.
    """
    if type not in (1, 2, 3):
        raise ValueError(f"type must be 1, 2 or 3, got {type!r}")
    n, N = spec.n, spec.N
    L = float(spec.log_distance(t))
    if not L > 0:
        raise DomainError("the error bound is undefined at the base point")
    alpha = float(order.check(t))
    if spec.side == "left":
        tau = np.linspace(spec.a, t, samples)
        width = t - spec.a
        reach = 2.0 * t - spec.a
    else:
        tau = np.linspace(t, spec.b, samples)
        width = spec.b - t
        reach = spec.b

    m = N if literal else n
    # x_m' = x_{m+1} / tau
    if m + 1 > x.k_max:
        x = FunctionModel(x.expr, x.a, x.b, k_max=m + 1, source=x.source, validate=False)
    dm = x_sequence(x, tau, m + 1)[m] / tau
    q = n - alpha
    bound = width * math.exp(q * q + q) / (gamma(n + 1 - alpha) * N**q * q) \
        * L**q * _max_abs(dm)
    if type == 1:
        return bound

    dalpha = float(order.derivative(t))
    c = 1.0 / (1.0 - alpha) if type == 2 else digamma(2.0 - alpha)
    q = 1.0 - alpha
    d1 = log_jet(x.expr, tau, 1).c[1] / tau
    bound += width * t * abs(dalpha) * math.exp(q * q + q) / (gamma(2.0 - alpha) * N**q * q) \
        * L**q * _max_abs(d1) * abs(c - math.log(L) + reach * L / N)
    return bound


def bound_stability(type: int, x: FunctionModel, order: OrderFunction, spec: ApproxSpec,
                    t: float, samples: int = 256, literal: bool = False) -> tuple[float, float]:
    """The bound with ``samples`` points and the relative change when doubled."""
    coarse = error_bound(type, x, order, spec, t, samples, literal)
    fine = error_bound(type, x, order, spec, t, 2 * samples, literal)
    change = 0.0 if coarse == fine else abs(fine - coarse) / max(abs(fine), abs(coarse))
    return fine, change

# }}}

# vim: fdm=marker
