import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

import oracles
from properscore.errors import DegenerateSampleError, DimensionError, DomainError
from properscore.experiments import make_rng
from properscore.families import MixtureNormalSpec, crps_closed, crps_mixnorm, logs_closed
from properscore.sample_scores import (SampleForecast, bandwidth_nrd, crps_sample, crps_sample_edf,
                                       crps_sample_kde, crps_sample_numint, kde_mixture, logs_sample)

finite = st.floats(-1e3, 1e3, allow_nan=False)


def test_edf_examples():
    assert crps_sample_edf(1.0, [0.0, 2.0]) == 0.5
    assert crps_sample_edf(1.0, [0.0, 2.0], [0.5, 0.5]) == 0.5
    assert crps_sample_edf(0.3, [2.5]) == pytest.approx(2.2, rel=1e-15)


def test_kde_and_logs_examples():
    assert crps_sample_kde(0.0, [0.0], bw=1.0) == pytest.approx(crps_closed("norm", 0.0), rel=1e-15)
    assert logs_sample(0.0, [0.0], bw=1.0) == pytest.approx(0.5 * math.log(2 * math.pi), rel=1e-15)
    assert logs_sample(4.0, [4.0, 4.0, 4.0], bw=1.0) == pytest.approx(0.5 * math.log(2 * math.pi),
                                                                      rel=1e-15)


def test_kde_is_the_induced_mixture():
    x = make_rng(1).normal(size=40)
    w = make_rng(2).random(40)
    h = 0.37
    mix = MixtureNormalSpec(x, np.full(40, h), w)
    assert crps_sample_kde(0.2, SampleForecast(x, w), bw=h) == crps_mixnorm(mix, 0.2)
    assert kde_mixture(SampleForecast(x, w), h).weights == pytest.approx(mix.weights)


def test_monte_carlo_agreement_with_closed_forms():
    x = make_rng(3).normal(2.0, 3.0, 5000)
    assert abs(crps_sample_kde(0.0, x) - crps_closed("norm", 0.0, mean=2, sd=3)) < 0.05
    assert abs(logs_sample(0.0, x) - logs_closed("norm", 0.0, mean=2, sd=3)) < 0.1


def test_bandwidth_rule():
    expected = 1.06 * min(math.sqrt(0.5), 0.5 / 1.349) * 2 ** -0.2
    assert bandwidth_nrd([0.0, 1.0]) == pytest.approx(expected, rel=1e-15)
    x = make_rng(4).normal(size=100)
    assert bandwidth_nrd(3.5 * x) == pytest.approx(3.5 * bandwidth_nrd(x), rel=1e-13)
    with pytest.raises(DegenerateSampleError):
        bandwidth_nrd([2.0, 2.0, 2.0])
    with pytest.raises(DegenerateSampleError):
        bandwidth_nrd([1.0])
    with pytest.raises(DegenerateSampleError):
        crps_sample_kde(0.0, [1.0, 1.0])


def test_bandwidth_falls_back_to_nonzero_spread():
    # IQR vanishes but the standard deviation does not
    x = [0.0] * 10 + [5.0]
    assert bandwidth_nrd(x) == pytest.approx(1.06 * np.std(x, ddof=1) * 11 ** -0.2)


def test_sorted_form_matches_numerical_integration():
    rng = make_rng(5)
    for _ in range(10):
        x = rng.normal(size=int(rng.integers(1, 30)))
        w = rng.random(x.size)
        y = float(rng.normal())
        assert crps_sample_edf(y, x) == pytest.approx(crps_sample_numint(y, x), abs=1e-12)
        assert crps_sample_edf(y, x, w) == pytest.approx(crps_sample_numint(y, x, w), abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(arrays(float, st.integers(1, 60), elements=finite), finite)
def test_sorted_form_matches_double_sum(x, y):
    assert crps_sample_edf(y, x) == pytest.approx(oracles.crps_kernel_naive(y, x), rel=1e-10, abs=1e-9)
    assert crps_sample_edf(y, x) >= 0


@settings(max_examples=100, deadline=None)
@given(arrays(float, st.integers(1, 60), elements=finite), finite, st.data())
def test_weighted_form_matches_weighted_double_sum(x, y, data):
    w = data.draw(arrays(float, x.size, elements=st.floats(0.01, 10)))
    assert crps_sample_edf(y, x, w) == pytest.approx(oracles.crps_kernel_naive(y, x, w),
                                                     rel=1e-10, abs=1e-9)


def test_uniform_weights_equal_unweighted():
    rng = make_rng(6)
    for _ in range(50):
        x = rng.normal(size=int(rng.integers(1, 200)))
        y = float(rng.normal())
        assert abs(crps_sample_edf(y, x, np.full(x.size, 3.0)) - crps_sample_edf(y, x)) <= 1e-12


def test_permutation_and_tie_invariance():
    rng = make_rng(7)
    x = np.round(rng.normal(size=300), 1)
    w = rng.random(300)
    perm = rng.permutation(300)
    for y in (-0.5, 0.0, 0.1, 2.0):
        assert crps_sample_edf(y, x[perm]) == pytest.approx(crps_sample_edf(y, x), abs=1e-12)
        assert crps_sample_edf(y, x[perm], w[perm]) == pytest.approx(crps_sample_edf(y, x, w),
                                                                     abs=1e-12)
        assert logs_sample(y, x[perm], 0.3) == pytest.approx(logs_sample(y, x, 0.3), abs=1e-12)


def test_zero_weight_draws_are_ignored():
    x = [0.0, 1.0, 50.0]
    assert crps_sample_edf(0.4, x, [1, 1, 0]) == pytest.approx(crps_sample_edf(0.4, [0.0, 1.0]),
                                                               abs=1e-15)


def test_large_weighted_sample_is_fast():
    rng = make_rng(8)
    x = rng.normal(size=20_000)
    w = rng.random(20_000)
    assert crps_sample_edf(0.1, x, w) > 0


def test_dispatch_and_errors():
    assert crps_sample(1.0, [0.0, 2.0]) == 0.5
    assert crps_sample(0.0, [0.0], method="kde", bw=1.0) == pytest.approx(crps_closed("norm", 0.0),
                                                                          rel=1e-15)
    with pytest.raises(ValueError):
        crps_sample(0.0, [1.0], method="quantile")
    with pytest.raises(DomainError):
        crps_sample_edf(math.inf, [1.0])
    with pytest.raises(DomainError):
        SampleForecast([1.0, math.nan])
    with pytest.raises(DomainError):
        SampleForecast([1.0, 2.0], [1.0, -1.0])
    with pytest.raises(DomainError):
        SampleForecast([1.0, 2.0], [0.0, 0.0])
    with pytest.raises(DimensionError):
        SampleForecast([1.0, 2.0], [1.0])
    with pytest.raises(DimensionError):
        SampleForecast([])
    with pytest.raises(DomainError):
        logs_sample(0.0, [1.0, 2.0], bw=0.0)


def test_forecast_is_immutable():
    fc = SampleForecast([3.0, 1.0], [1, 3])
    np.testing.assert_allclose(fc.weights, [0.25, 0.75])
    with pytest.raises(ValueError):
        fc.draws[0] = 0.0
