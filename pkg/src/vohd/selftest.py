"""Built-in consistency checks run by ``vohd selftest``.

Each case compares two independently computed numbers. A case passes when
their difference is within its tolerance; any library error counts as a
failure and is reported in the table instead of propagating.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from vohd import oracle
from vohd.closedform import LogPowerSpec, exact_log_power, section4_exact, section4_order
from vohd.errors import VohdError
from vohd.expansion import ApproxSpec, approximate, build_moments, error_bound, interior_grid
from vohd.expr import FunctionModel, OrderFunction, catalog, parse
from vohd.quadrature import QuadratureConfig
from vohd.specfun import beta, digamma, gamma, gamma_ratio

__all__ = ["CaseResult", "SUITES", "format_table", "run"]

EULER_GAMMA = 0.5772156649015329


@dataclass(frozen=True)
class CaseResult:
    suite: str
    name: str
    error: float
    tol: float
    message: str = ""

    @property
    def passed(self) -> bool:
        return not self.message and self.error <= self.tol


Check = Callable[[], float]


def _rel(value: float, reference: float) -> float:
    return abs(value - reference) / max(abs(reference), 1.0)


def _specfun_cases(cfg: QuadratureConfig) -> Iterable[tuple[str, Check, float]]:
    yield "gamma(0.5) = sqrt(pi)", lambda: _rel(gamma(0.5), math.sqrt(math.pi)), 1e-14
    yield "gamma(5) = 24", lambda: _rel(gamma(5.0), 24.0), 0.0
    yield "gamma(-1.5) = 4 sqrt(pi)/3", lambda: _rel(gamma(-1.5), 4 * math.sqrt(math.pi) / 3), 1e-14
    yield "digamma(1) = -euler", lambda: abs(digamma(1.0) + EULER_GAMMA), 1e-14
    yield ("digamma(0.5) = -euler - 2 ln 2",
           lambda: abs(digamma(0.5) + EULER_GAMMA + 2 * math.log(2.0)), 1e-14)
    xs = (0.1, 0.35, 1.7, 4.2, 9.5, 23.3, -0.4, -2.7)
    yield ("gamma(x+1) = x gamma(x)",
           lambda: max(_rel(gamma(x + 1), x * gamma(x)) for x in xs), 1e-12)
    yield ("digamma(x+1) = digamma(x) + 1/x",
           lambda: max(abs(digamma(x + 1) - digamma(x) - 1 / x) for x in xs), 1e-11)
    yield ("gamma(x) gamma(1-x) = pi/sin(pi x)",
           lambda: max(_rel(gamma(x) * gamma(1 - x), math.pi / math.sin(math.pi * x))
                       for x in (0.1, 0.35, 0.5, 0.9, -1.3)), 1e-12)
    pq = ((0.5, 0.5), (1.2, 3.4), (7.0, 2.5), (0.3, 10.0))
    yield ("beta = gamma gamma / gamma",
           lambda: max(_rel(beta(p, q), gamma(p) * gamma(q) / gamma(p + q)) for p, q in pq), 1e-10)
    yield ("gamma_ratio(x, p) = gamma(x+p)/gamma(x)",
           lambda: max(_rel(gamma_ratio(x, p), gamma(x + p) / gamma(x))
                       for x in (0.25, 1.5, -0.75) for p in (1, 3, 8)), 1e-10)


def _grid(side: str, count: int = 5) -> np.ndarray:
    return np.array(interior_grid(side, 1.0, 5.0, count))


def _orders() -> tuple[OrderFunction, OrderFunction]:
    return (OrderFunction(parse("0.5"), 1.0, 5.0, source="0.5"), section4_order())


def _closedform_cases(cfg: QuadratureConfig) -> Iterable[tuple[str, Check, float]]:
    const = OrderFunction(parse("0.35"), 1.0, 5.0, source="0.35")
    for side in ("left", "right"):
        for g in (1.0, 2.5):
            spec = LogPowerSpec(side, g, 1.0, 5.0)
            t = _grid(side)

            def spread(spec=spec, t=t):
                v = [exact_log_power(spec, k, const, t) for k in (1, 2, 3)]
                return float(np.max(np.abs(np.ptp(v, axis=0))))

            yield f"{side} g={g}: types agree for constant order", spread, 0.0
    half = OrderFunction(parse("0.5"), 1.0, 5.0)
    yield ("ln t at t=e, order 1/2 = 2/sqrt(pi)",
           lambda: abs(exact_log_power(LogPowerSpec("left", 1.0, 1.0, 5.0), 1, half, math.e)
                       - 2 / math.sqrt(math.pi)), 1e-15)


def _oracle_cases(cfg: QuadratureConfig) -> Iterable[tuple[str, Check, float]]:
    for side in ("left", "right"):
        for g in (0.5, 1.0, 2.0, 3.7):
            entry = catalog(f"{'logpow' if side == 'left' else 'rlogpow'}({g})", 1.0, 5.0)
            x = FunctionModel(entry.expr, 1.0, 5.0)
            spec = LogPowerSpec(side, g, 1.0, 5.0)
            t = _grid(side)
            for order in _orders():
                for k in (1, 2, 3):
                    def diff(x=x, spec=spec, t=t, order=order, k=k, side=side):
                        got = oracle.evaluate(side, k, x, order, t, cfg)
                        return float(np.max(np.abs(got - exact_log_power(spec, k, order, t))))

                    yield f"{side} g={g} alpha={order.label} type {k}", diff, 1e-6
    const = OrderFunction(parse("0.35"), 1.0, 5.0, source="0.35")
    x = FunctionModel(parse("sin(t) + t^2"), 1.0, 5.0)
    for side in ("left", "right"):
        t = _grid(side)

        def spread(side=side, t=t):
            v = [oracle.evaluate(side, k, x, const, t, cfg) for k in (1, 2, 3)]
            return float(np.max(np.ptp(v, axis=0)))

        yield f"{side}: types agree for constant order", spread, 1e-9


def _expansion_cases(cfg: QuadratureConfig) -> Iterable[tuple[str, Check, float]]:
    scenarios = (("left", "lnt-left", "lnt", 10), ("right", "ln5t-right", "rlogpow(1)", 4))
    order = section4_order()
    for side, which, source, N in scenarios:
        x = FunctionModel(catalog(source, 1.0, 5.0).expr, 1.0, 5.0)
        grid = interior_grid(side, 1.0, 5.0, 20)
        for k in (1, 2, 3):
            spec = ApproxSpec(side, k, 1, N, 1.0, 5.0, grid)

            def excess(spec=spec, x=x, k=k, which=which):
                approx = approximate(x, order, spec, build_moments(x, spec))
                err = np.abs(approx - section4_exact(which, k, spec.t))
                bound = np.array([error_bound(k, x, order, spec, t) for t in spec.t])
                return float(max(np.max(err - bound), 0.0))

            yield f"{which} N={N} type {k}: error within bound", excess, 1e-9
    const = OrderFunction(parse("0.35"), 1.0, 5.0, source="0.35")
    x = FunctionModel(parse("exp(t/4)"), 1.0, 5.0)
    for side in ("left", "right"):
        grid = interior_grid(side, 1.0, 5.0, 10)

        def spread(side=side, grid=grid):
            v = []
            for k in (1, 2, 3):
                spec = ApproxSpec(side, k, 1, 8, 1.0, 5.0, grid)
                v.append(approximate(x, const, spec, build_moments(x, spec)))
            return float(np.max(np.ptp(v, axis=0)))

        yield f"{side}: expansion types agree for constant order", spread, 1e-12


SUITES: dict[str, Callable[[QuadratureConfig], Iterable[tuple[str, Check, float]]]] = {
    "specfun": _specfun_cases,
    "closedform": _closedform_cases,
    "oracle": _oracle_cases,
    "expansion": _expansion_cases,
}


def run(cfg: QuadratureConfig, only: Iterable[str] | None = None) -> list[CaseResult]:
    names = list(SUITES) if only is None else list(only)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise ValueError(f"unknown suite(s) {', '.join(unknown)}; choose from {', '.join(SUITES)}")
    results = []
    for suite in names:
        for name, check, tol in SUITES[suite](cfg):
            try:
                error = float(check())
                results.append(CaseResult(suite, name, error, tol,
                                          "" if math.isfinite(error) else "non-finite result"))
            except VohdError as exc:
                message = f"{type(exc).__name__}: {exc}"
                if getattr(exc, "t", None) is not None:
                    message += f" at t = {exc.t:.17g}"
                results.append(CaseResult(suite, name, math.nan, tol, message))
    return results


def format_table(results: list[CaseResult]) -> str:
    width = max(len(r.name) for r in results)
    lines = [f"{'suite':<10}  {'case':<{width}}  {'error':>10}  {'tol':>8}  result"]
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        line = f"{r.suite:<10}  {r.name:<{width}}  {r.error:>10.3g}  {r.tol:>8.1g}  {status}"
        if r.message:
            line += f"  ({r.message})"
        lines.append(line)
    return "\n".join(lines)
