from __future__ import annotations

import math

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vohd.errors import DomainError, PoleError
from vohd.specfun import beta, digamma, gamma, gamma_ratio, ln_gamma, rising, vdigamma, vgamma

mpmath.mp.dps = 40


def rel(value, reference):
    return abs(value - reference) / abs(reference)


@pytest.mark.parametrize(("x", "expected"), [(1.0, 1.0), (5.0, 24.0), (0.5, 1.7724538509055160)])
def test_gamma_examples(x, expected):
    assert gamma(x) == pytest.approx(expected, rel=1e-15)


@pytest.mark.parametrize("x", [0.0, -1.0, -2.0, -17.0])
def test_gamma_poles(x):
    with pytest.raises(PoleError):
        gamma(x)


def test_gamma_overflow():
    with pytest.raises(OverflowError):
        gamma(171.7)
    assert math.isfinite(gamma(171.6))


@pytest.mark.parametrize(
    "x", [1e-8, 0.013, 0.25, 0.5, 0.99, 1.5, 3.3, 7.77, 14.9, 15.0, 15.1, 33.3, 99.5, 170.2])
def test_gamma_matches_mpmath(x):
    assert rel(gamma(x), float(mpmath.gamma(x))) <= 1e-13


@pytest.mark.parametrize("x", [-0.5, -1.5, -2.3, -7.9, -0.01, -30.25])
def test_gamma_negative_matches_mpmath(x):
    assert rel(gamma(x), float(mpmath.gamma(x))) <= 1e-13


@pytest.mark.parametrize(("x", "expected"), [(1.0, 0.0), (2.0, 0.0), (10.0, math.log(362880.0))])
def test_ln_gamma_examples(x, expected):
    assert ln_gamma(x) == pytest.approx(expected, rel=1e-13, abs=0.0)


@pytest.mark.parametrize("x", [0.001, 0.3, 1.5, 2.5, 14.0, 15.5, 80.0, 1e4, 1e10])
def test_ln_gamma_matches_mpmath(x):
    assert rel(ln_gamma(x), float(mpmath.loggamma(x))) <= 1e-13


def test_ln_gamma_domain():
    with pytest.raises(DomainError):
        ln_gamma(0.0)
    with pytest.raises(DomainError):
        ln_gamma(-2.5)


def test_digamma_examples():
    assert abs(digamma(1.0) + 0.5772156649015329) <= 1e-12
    assert abs(digamma(2.0) - (digamma(1.0) + 1.0)) <= 1e-12
    assert abs(digamma(0.5) + 1.9635100260214235) <= 1e-12


@pytest.mark.parametrize("x", [1e-6, 0.1, 0.65, 1.0, 2.2, 5.9, 6.0, 12.5, 300.0, -0.5, -1.3, -4.75])
def test_digamma_matches_mpmath(x):
    assert abs(digamma(x) - float(mpmath.digamma(x))) <= 1e-12 * max(1.0, abs(digamma(x)))


@pytest.mark.parametrize("x", [0.0, -1.0, -3.0])
def test_digamma_poles(x):
    with pytest.raises(PoleError):
        digamma(x)


def test_beta_examples():
    assert beta(1.0, 1.0) == pytest.approx(1.0, rel=1e-12)
    assert beta(2.0, 3.0) == pytest.approx(1.0 / 12.0, rel=1e-12)
    assert beta(0.5, 0.5) == pytest.approx(math.pi, rel=1e-12)
    with pytest.raises(DomainError):
        beta(0.0, 1.0)


def test_gamma_ratio_examples():
    assert gamma_ratio(-0.7, 3) == pytest.approx(-0.273, rel=1e-15)
    assert gamma_ratio(123.4, 0) == 1.0
    assert gamma_ratio(2.0, 2) == 6.0
    # no trouble at a pole of gamma itself
    assert gamma_ratio(-2.0, 4) == 0.0
    assert rising(-0.5, 2) == pytest.approx(-0.25)


def test_vectorized_wrappers():
    assert list(vgamma([1.0, 5.0])) == [1.0, 24.0]
    assert vdigamma([1.0]).shape == (1,)


positive = st.floats(min_value=0.1, max_value=50.0)


@settings(max_examples=1000, deadline=None)
@given(positive)
def test_gamma_recurrence(x):
    assert rel(gamma(x + 1.0), x * gamma(x)) <= 1e-12


@settings(max_examples=1000, deadline=None)
@given(positive)
def test_digamma_recurrence(x):
    assert abs(digamma(x + 1.0) - digamma(x) - 1.0 / x) <= 1e-11


@settings(max_examples=300, deadline=None)
@given(st.floats(min_value=0.01, max_value=0.99))
def test_gamma_reflection(x):
    assert rel(gamma(x) * gamma(1.0 - x), math.pi / math.sin(math.pi * x)) <= 1e-12


@settings(max_examples=500, deadline=None)
@given(st.floats(min_value=0.1, max_value=20.0), st.floats(min_value=0.1, max_value=20.0))
def test_beta_gamma_relation(p, q):
    assert rel(beta(p, q), gamma(p) * gamma(q) / gamma(p + q)) <= 1e-10


@settings(max_examples=500, deadline=None)
@given(st.floats(min_value=-20.0, max_value=30.0), st.integers(min_value=0, max_value=30))
def test_gamma_ratio_matches_gamma_quotient(x, p):
    near_pole = any(abs(v - round(v)) < 1e-6 and round(v) <= 0 for v in (x, x + p))
    if near_pole or x + p > 170:
        return
    assert rel(gamma_ratio(x, p), gamma(x + p) / gamma(x)) <= 1e-10
