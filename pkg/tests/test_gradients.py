import math

import numpy as np
import pytest
from scipy import stats

from properscore.errors import NonFiniteScoreError, UnavailableScoreError
from properscore.families import FamilySpec, crps_closed, gradcrps, gradlogs, hesscrps, logs_closed

PHI0 = 1 / math.sqrt(2 * math.pi)


def fd_grad(score, family, names, fixed, theta, y, h=1e-6):
    def f(th):
        return score(FamilySpec(family, {**fixed, names[0]: th[0], names[1]: th[1]}), y)
    return np.array([(f(theta + e) - f(theta - e)) / (2 * h) for e in np.eye(2) * h])


def test_normal_examples():
    g = gradcrps("norm", 0.0, mean=0, sd=1)
    assert g[0] == 0.0
    assert g[1] == pytest.approx((math.sqrt(2) - 1) / math.sqrt(math.pi), rel=1e-14)
    g = gradcrps("norm", 2.0, mean=0, sd=1)
    assert g[0] == pytest.approx(-(2 * stats.norm.cdf(2) - 1), rel=1e-14)
    H = hesscrps("norm", 0.0, mean=0, sd=1)
    assert H[0, 0] == pytest.approx(2 * PHI0, rel=1e-14)
    assert H[0, 1] == 0.0 and H[1, 0] == 0.0


def test_normal_hessian_closed_form():
    mu, sigma, y = 0.4, 1.7, -0.9
    z = (y - mu) / sigma
    phi = stats.norm.pdf(z)
    H = hesscrps("norm", y, mean=mu, sd=sigma)
    expected = np.array([[2 * phi, 2 * z * phi], [2 * z * phi, 2 * z * z * phi]]) / sigma
    np.testing.assert_allclose(H, expected, rtol=1e-13)


@pytest.mark.parametrize("family,fixed,theta,y", [
    ("tnorm", dict(lower=0), (1.0, 1.0), 0.5),
    ("logis", {}, (0.0, 1.0), 1.0),
    ("t", dict(df=4.5), (0.3, 2.0), -1.7),
    ("cnorm", dict(lower=-0.5, upper=2), (0.2, 1.4), 2.5),
    ("clogis", dict(upper=0.5), (1.0, 0.7), -0.2),
    ("ct", dict(df=3, lower=0), (-0.5, 1.2), 0.0),
    ("tlogis", dict(lower=-1, upper=1), (0.4, 0.8), 0.9),
    ("tt", dict(df=6, upper=1), (0.0, 1.0), 0.3),
    ("tnorm", dict(lower=-1, upper=1), (0.4, 0.8), -1.3),
])
def test_against_finite_differences(family, fixed, theta, y):
    names = ("mean", "sd") if family == "norm" else ("location", "scale")
    theta = np.array(theta)
    spec = FamilySpec(family, {**fixed, names[0]: theta[0], names[1]: theta[1]})
    np.testing.assert_allclose(gradcrps(spec, y), fd_grad(crps_closed, family, names, fixed, theta, y),
                               rtol=1e-6, atol=1e-8)
    H = hesscrps(spec, y)
    assert H[0, 1] == H[1, 0]
    fd_h = np.array([(gradcrps(FamilySpec(family, {**fixed, names[0]: th[0], names[1]: th[1]}), y)
                      - gradcrps(FamilySpec(family, {**fixed, names[0]: tl[0], names[1]: tl[1]}), y))
                     / 2e-6 for th, tl in ((theta + e, theta - e) for e in np.eye(2) * 1e-6)])
    np.testing.assert_allclose(H, fd_h, rtol=1e-5, atol=1e-5)


@pytest.mark.parametrize("family,fixed", [("norm", {}), ("logis", {}), ("t", dict(df=2.5))])
def test_log_score_gradient(family, fixed):
    names = ("mean", "sd") if family == "norm" else ("location", "scale")
    theta = np.array([0.3, 1.6])
    for y in (-2.0, 0.3, 1.1, 5.0):
        spec = FamilySpec(family, {**fixed, names[0]: theta[0], names[1]: theta[1]})
        np.testing.assert_allclose(gradlogs(spec, y),
                                   fd_grad(logs_closed, family, names, fixed, theta, y),
                                   rtol=1e-6, atol=1e-9)


def test_unsupported_families():
    with pytest.raises(UnavailableScoreError):
        gradcrps("gamma", 1.0, shape=2)
    with pytest.raises(UnavailableScoreError):
        hesscrps("lapl", 1.0)
    with pytest.raises(UnavailableScoreError):
        gradlogs("tnorm", 1.0, lower=0)
    with pytest.raises(NonFiniteScoreError):
        gradcrps("t", 0.0, df=0.9)


def test_keyword_parameters_match_spec_object():
    spec = FamilySpec.of("cnorm", location=0.5, scale=2, lower=0)
    np.testing.assert_array_equal(gradcrps(spec, 1.0),
                                  gradcrps("cnorm", 1.0, location=0.5, scale=2, lower=0))
