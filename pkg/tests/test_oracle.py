from __future__ import annotations

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import definitional
from vohd import oracle
from vohd.closedform import LogPowerSpec, exact_log_power
from vohd.errors import DomainError, QuadratureError
from vohd.expansion import interior_grid
from vohd.expr import FunctionModel, OrderFunction, catalog, parse, substitute, to_source
from vohd.quadrature import QuadratureConfig

A, B = 1.0, 5.0


def _model(source, a=A, b=B):
    return FunctionModel(catalog(source, a, b).expr if catalog(source, a, b) else parse(source),
                         a, b, source=source)


def _order(source, a=A, b=B):
    return OrderFunction(parse(source), a, b, source=source)


@pytest.mark.parametrize("side", ["left", "right"])
@pytest.mark.parametrize("g", [0.5, 1.0, 2.0, 3.7])
@pytest.mark.parametrize("alpha", ["0.5", "t/20", "0.3 + 0.1*sin(t)"])
def test_matches_closed_form(side, g, alpha):
    x = _model(f"{'logpow' if side == 'left' else 'rlogpow'}({g})")
    order = _order(alpha)
    t = np.array(interior_grid(side, A, B, 12))
    spec = LogPowerSpec(side, g, A, B)
    for k in (1, 2, 3):
        got = oracle.evaluate(side, k, x, order, t)
        np.testing.assert_allclose(got, exact_log_power(spec, k, order, t), rtol=0, atol=1e-9)


FUNCTIONS = {
    "sin(t) + t^2": (lambda s: mpmath.sin(s) + s**2, lambda s: mpmath.cos(s) + 2 * s),
    "exp(t/4)": (lambda s: mpmath.exp(s / 4), lambda s: mpmath.exp(s / 4) / 4),
}


@pytest.mark.parametrize("side", ["left", "right"])
@pytest.mark.parametrize("source", sorted(FUNCTIONS))
@pytest.mark.parametrize("type", [1, 2, 3])
def test_matches_definition_for_general_functions(side, source, type):
    x = _model(source)
    order = _order("0.3 + 0.1*sin(t)")
    f, df = FUNCTIONS[source]
    alpha = lambda s: mpmath.mpf(3) / 10 + mpmath.sin(s) / 10
    for t in (1.8, 4.1):
        expected = definitional(side, type, f, df, alpha, A, B, t)
        assert oracle.evaluate(side, type, x, order, t) == pytest.approx(expected, rel=1e-9, abs=1e-10)


@pytest.mark.parametrize("side", ["left", "right"])
@pytest.mark.parametrize("alpha", ["0.95", "0.9 + 0.05*sin(t)", "0.02 + t/200"])
def test_extreme_orders(side, alpha):
    order = _order(alpha)
    t = np.array(interior_grid(side, A, B, 10))
    for g in (0.5, 2.0):
        x = _model(f"{'logpow' if side == 'left' else 'rlogpow'}({g})")
        spec = LogPowerSpec(side, g, A, B)
        for k in (1, 2, 3):
            got = oracle.evaluate(side, k, x, order, t)
            np.testing.assert_allclose(got, exact_log_power(spec, k, order, t), rtol=1e-8, atol=1e-8)


@pytest.mark.parametrize("type", [1, 2, 3])
@pytest.mark.parametrize("source", ["sin(t) + t^2", "ln(t)^3", "exp(t/4)"])
def test_mirror_symmetry(type, source):
    # the right operator of x at t is the left operator of x(ab/s) at s = ab/t
    a, b = 1.5, 4.0
    mirror = parse(f"{a * b!r}/t")
    x = FunctionModel(parse(source), a, b)
    y = FunctionModel(substitute(parse(source), mirror), a, b)
    alpha = parse("0.2 + t/10")
    order = OrderFunction(alpha, a, b)
    reflected = OrderFunction(substitute(alpha, mirror), a, b, source=to_source(alpha))
    t = np.array(interior_grid("right", a, b, 8))
    right = oracle.evaluate("right", type, x, order, t)
    left = oracle.evaluate("left", type, y, reflected, a * b / t)
    np.testing.assert_allclose(right, left, rtol=1e-9, atol=1e-11)


@pytest.mark.parametrize("type", [1, 2, 3])
def test_vanishes_at_the_base_point(type):
    value = oracle.evaluate("left", type, _model("lnt"), _order("t/20"), 1.0 + 1e-4)
    assert abs(value) <= 1e-2


@pytest.mark.parametrize("side", ["left", "right"])
def test_constant_order_collapse(side):
    x = _model("sin(t) + t^2")
    order = _order("0.35")
    t = np.array(interior_grid(side, A, B, 25))
    values = [oracle.evaluate(side, k, x, order, t) for k in (1, 2, 3)]
    assert np.max(np.ptp(values, axis=0)) <= 1e-9
    assert np.all(oracle.correction_12(side, x, order, t) == 0.0)
    assert np.all(oracle.correction_23(side, x, order, t) == 0.0)


def test_constant_function_gives_zero():
    x = _model("3")
    for k in (1, 2, 3):
        assert oracle.evaluate("left", k, x, _order("t/20"), 2.0) == 0.0


def test_scalar_and_array_shapes():
    x, order = _model("lnt"), _order("t/20")
    assert isinstance(oracle.type1("left", x, order, 2.0), float)
    assert oracle.type1("left", x, order, np.array([2.0, 3.0])).shape == (2,)


def test_domain_errors():
    x, order = _model("lnt"), _order("t/20")
    with pytest.raises(DomainError):
        oracle.evaluate("left", 1, x, order, 1.0)
    with pytest.raises(DomainError):
        oracle.evaluate("right", 1, x, order, 5.0)
    with pytest.raises(ValueError):
        oracle.evaluate("middle", 1, x, order, 2.0)
    with pytest.raises(ValueError):
        oracle.evaluate("left", 4, x, order, 2.0)


def test_unreachable_tolerance_names_the_point():
    x, order = _model("exp(t)"), _order("t/20")
    t = np.array(interior_grid("left", A, B, 5))
    with pytest.raises(QuadratureError) as info:
        oracle.evaluate("left", 2, x, order, t, QuadratureConfig(tol=1e-30))
    assert info.value.t in t


@settings(max_examples=40, deadline=None)
@given(st.floats(min_value=0.05, max_value=0.95), st.floats(min_value=1.01, max_value=5.0),
       st.floats(min_value=0.5, max_value=4.0))
def test_type1_of_log_power_property(alpha, t, g):
    x = _model(f"logpow({g})")
    order = _order(repr(alpha))
    expected = exact_log_power(LogPowerSpec("left", g, A, B), 1, order, t)
    assert oracle.type1("left", x, order, t) == pytest.approx(expected, rel=1e-8, abs=1e-10)
