import math

import numpy as np
import pytest

from properscore.errors import DimensionError, DomainError
from properscore.experiments import make_rng
from properscore.multivariate import MultivariateForecast, es_sample, vs_sample
from properscore.sample_scores import crps_sample_edf


def naive_es(y, X):
    m = X.shape[1]
    t1 = sum(np.linalg.norm(X[:, i] - y) for i in range(m)) / m
    t2 = sum(np.linalg.norm(X[:, i] - X[:, j]) for i in range(m) for j in range(m))
    return t1 - t2 / (2 * m * m)


def naive_vs(y, X, w, p):
    d, m = X.shape
    total = 0.0
    for i in range(d):
        for j in range(d):
            vx = sum(abs(X[i, k] - X[j, k]) ** p for k in range(m)) / m
            total += w[i, j] * (abs(y[i] - y[j]) ** p - vx) ** 2
    return total


def test_hand_examples():
    assert es_sample([0.0, 0.0], [[1.0, -1.0], [0.0, 0.0]]) == 0.5
    assert vs_sample([0.0, 1.0], [[0.0], [3.0]], p=1.0) == 8.0
    assert vs_sample([0.0, 1.0], [[0.0], [3.0]]) == pytest.approx(2 * (1 - math.sqrt(3)) ** 2,
                                                                  rel=1e-15)


def test_perfect_point_forecast():
    y = [0.3, -1.2, 4.0]
    X = np.array(y)[:, None]
    assert es_sample(y, X) == 0.0
    assert vs_sample(y, X) == 0.0


def test_against_naive_sums():
    rng = make_rng(11)
    for p in (0.5, 1.0, 1.7, 2.0):
        d, m = 4, 30
        X = rng.normal(size=(d, m))
        y = rng.normal(size=d)
        w = rng.random((d, d))
        assert es_sample(y, X) == pytest.approx(naive_es(y, X), rel=1e-12)
        assert vs_sample(y, X, w, p) == pytest.approx(naive_vs(y, X, w, p), rel=1e-12)


def test_one_dimensional_energy_score_is_sample_crps():
    rng = make_rng(12)
    for _ in range(100):
        x = rng.normal(size=int(rng.integers(1, 300))) * rng.uniform(0.1, 10)
        y = float(rng.normal(0, 3))
        assert abs(es_sample([y], x[None, :]) - crps_sample_edf(y, x)) <= 1e-12


def test_translation_properties():
    rng = make_rng(13)
    X = rng.normal(size=(3, 50))
    y = rng.normal(size=3)
    c = np.array([5.0, -2.0, 0.5])
    assert es_sample(y + c, X + c[:, None]) == pytest.approx(es_sample(y, X), abs=1e-12)
    # the variogram score only sees differences, so a common shift leaves it unchanged
    assert vs_sample(y + 2.5, X + 2.5) == pytest.approx(vs_sample(y, X), abs=1e-12)


def test_zero_weights_and_nonnegativity():
    rng = make_rng(14)
    X = rng.normal(size=(3, 20))
    y = rng.normal(size=3)
    assert vs_sample(y, X, np.zeros((3, 3))) == 0.0
    assert es_sample(y, X) >= 0 and vs_sample(y, X) >= 0


def test_blocked_evaluation_matches_direct():
    # large enough to be split into several pairwise blocks
    rng = make_rng(15)
    X = rng.normal(size=(2, 1500))
    y = rng.normal(size=2)
    diff = X.T[:, None, :] - X.T[None, :, :]
    direct = (np.mean(np.linalg.norm(X.T - y, axis=1))
              - 0.5 * np.mean(np.sqrt(np.sum(diff * diff, axis=2))))
    assert es_sample(y, X) == pytest.approx(direct, rel=1e-12)


def test_errors():
    with pytest.raises(DimensionError):
        es_sample([0.0, 1.0, 2.0], [[1.0], [2.0]])
    with pytest.raises(DimensionError):
        vs_sample([0.0, 1.0], [[1.0], [2.0]], w=np.ones((3, 3)))
    with pytest.raises(DomainError):
        vs_sample([0.0, 1.0], [[1.0], [2.0]], w=[[1, -1], [1, 1]])
    with pytest.raises(DomainError):
        vs_sample([0.0, 1.0], [[1.0], [2.0]], p=0.0)
    with pytest.raises(DomainError):
        MultivariateForecast([[1.0, math.inf]])
    fc = MultivariateForecast([[1.0, 2.0], [3.0, 4.0]])
    assert (fc.dim, fc.size) == (2, 2)
