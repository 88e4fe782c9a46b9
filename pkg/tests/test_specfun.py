"""Special functions against arbitrary-precision references (mpmath)."""
import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from properscore import specfun as sf
from properscore.errors import DomainError

mp.mp.dps = 40
REL = 1e-10


def close(value, ref, rel=REL, abs_=1e-300):
    ref = float(ref)
    return abs(value - ref) <= max(rel * abs(ref), abs_)


@pytest.mark.parametrize("x", [-38.0, -8.5, -1.0, 0.0, 0.3, 2.0, 9.0])
def test_normal_cdf_both_tails(x):
    assert close(sf.std_normal_cdf(x), mp.ncdf(x))
    assert close(sf.std_normal_pdf(x), mp.npdf(x))


def test_normal_cdf_vectorized_matches_scalar():
    xs = np.linspace(-10, 10, 41)
    np.testing.assert_allclose(sf.std_normal_cdf(xs), [sf.std_normal_cdf(float(x)) for x in xs],
                               rtol=1e-13)


@pytest.mark.parametrize("a,x", [(0.5, 0.01), (0.5, 3.0), (2.5, 1.0), (10.0, 12.0), (30.0, 5.0),
                                 (1.0, 50.0), (400.0, 380.5), (0.1, 1e-5)])
def test_reg_inc_gamma(a, x):
    lower = mp.gammainc(a, 0, x, regularized=True)
    upper = mp.gammainc(a, x, mp.inf, regularized=True)
    if lower < 0.5:
        assert close(sf.reg_inc_gamma(a, x), lower)
    if upper < 0.5:
        assert close(sf.reg_inc_gamma(a, x, "upper"), upper)
    assert abs(sf.reg_inc_gamma(a, x) + sf.reg_inc_gamma(a, x, "upper") - 1) < 1e-14


def test_reg_inc_gamma_edges_and_errors():
    assert sf.reg_inc_gamma(2.0, 0.0) == 0.0
    assert sf.reg_inc_gamma(2.0, math.inf, "upper") == 0.0
    with pytest.raises(DomainError):
        sf.reg_inc_gamma(0.0, 1.0)
    with pytest.raises(DomainError):
        sf.reg_inc_gamma(1.0, -1.0)
    with pytest.raises(ValueError):
        sf.reg_inc_gamma(1.0, 1.0, "middle")


def test_upper_inc_gamma_unregularized():
    assert close(sf.upper_inc_gamma(3.5, 2.0), mp.gammainc(3.5, 2.0))


@pytest.mark.parametrize("a,b,x", [(0.5, 0.5, 0.3), (2.0, 3.0, 0.9), (0.3, 7.0, 0.01),
                                   (25.0, 0.5, 0.999), (100.0, 120.0, 0.45), (1.0, 1.0, 0.77)])
def test_reg_inc_beta(a, b, x):
    ref = mp.betainc(a, b, 0, x, regularized=True)
    assert close(sf.reg_inc_beta(a, b, x), ref)


def test_inc_beta_pair_uses_exact_complement():
    # x = nu / (nu + t^2) for a far Student t quantile; 1 - x is passed exactly
    nu, t = 3.0, 1e6
    x, y = nu / (nu + t * t), t * t / (nu + t * t)
    ref = mp.betainc(nu / 2, 0.5, 0, mp.mpf(nu) / (nu + mp.mpf(t) ** 2), regularized=True)
    assert close(sf.inc_beta_pair(nu / 2, 0.5, x, y), ref)
    assert close(sf.inc_beta_pair(0.5, nu / 2, y, x), 1 - ref, rel=1e-15)


@pytest.mark.parametrize("a,b,c,x", [
    (1.0, 0.5, 2.0, 0.3), (3.5, 0.5, 2.0, -0.9), (40.0, 0.5, 2.0, -0.999),
    (0.5, 1.5, 2.5, 0.999), (1.2, -0.5, 1.0, -0.5), (2.0, 3.0, 4.0, -12.0),
    (0.7, 0.5, 2.0, -200.0), (1.0, 1.0, 2.0, 1.0 - 1e-9)])
def test_hyp2f1(a, b, c, x):
    assert close(sf.hyp2f1(a, b, c, x), mp.hyp2f1(a, b, c, x), rel=1e-9)


@settings(max_examples=60, deadline=None)
@given(st.floats(0.05, 60.0), st.floats(1e-6, 0.999))
def test_hyp2f1_negative_binomial_arguments(size, prob):
    # the arguments appearing in the negative binomial CRPS
    q = 1.0 - prob
    x = -4.0 * q / (prob * prob)
    ref = mp.hyp2f1(size + 1, 0.5, 2, x)
    assert close(sf.hyp2f1(size + 1, 0.5, 2.0, x), ref, rel=1e-8)


@pytest.mark.parametrize("order", [0, 1])
@pytest.mark.parametrize("x", [0.0, 0.5, 3.0, 24.9, 25.1, 80.0, 600.0])
def test_bessel_i(order, x):
    ref = mp.besseli(order, x)
    assert close(sf.bessel_i(order, x), ref)
    assert close(sf.bessel_i(order, x, scaled=True), ref * mp.exp(-x))


def test_bessel_i_overflow_and_errors():
    assert sf.bessel_i(0, 1e4) == math.inf
    assert sf.bessel_i(0, 1e4, scaled=True) > 0
    with pytest.raises(ValueError):
        sf.bessel_i(2, 1.0)
    with pytest.raises(DomainError):
        sf.bessel_i(0, -1.0)


@pytest.mark.parametrize("x", [1e-8, 0.2, 1.0, 1.5, 7.0, 60.0])
def test_expint_e1(x):
    assert close(sf.expint_e1(x), mp.e1(x))


@pytest.mark.parametrize("x", [-30.0, -2.0, -1e-6, 1e-6, 0.4, 5.0, 39.0, 41.0, 300.0])
def test_expint_ei(x):
    assert close(sf.expint_ei(x), mp.ei(x))


def test_expint_errors():
    with pytest.raises(DomainError):
        sf.expint_ei(0.0)
    with pytest.raises(DomainError):
        sf.expint_e1(0.0)


def test_beta_and_constants():
    assert close(sf.beta_fn(2.5, 0.5), mp.beta(2.5, 0.5))
    assert close(sf.lbeta(300.0, 200.0), mp.log(mp.beta(300, 200)))
    assert close(sf.EULER_GAMMA, mp.euler, rel=2.5e-16)
    assert close(sf.LOG_SQRT_2PI, mp.log(mp.sqrt(2 * mp.pi)), rel=2.5e-16)
