"""CRPS and log score for forecasts given as (weighted) simulated samples.

The empirical-CDF CRPS is evaluated exactly from the order statistics,

    CRPS = 2 sum_i w_(i) (x_(i) - y) (1{y < x_(i)} - P_i + w_(i)/2),

with ``P_i`` the cumulative weight of the first ``i`` sorted draws. For equal
weights this is the familiar ``(2/m^2) sum_i (x_(i) - y)(m 1{y < x_(i)} - i + 1/2)``.
Kernel-density variants smooth the sample with Gaussian kernels.
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import integrate
from scipy.special import logsumexp

from .families.mixture import MixtureNormalSpec, crps_mixnorm
from .specfun import LOG_SQRT_2PI
from .errors import DegenerateSampleError, DimensionError, DomainError

_NRD_IQR_SCALE = 1.349


@dataclass(frozen=True, eq=False)
class SampleForecast:
    """A collection of ``m`` draws with optional nonnegative weights.

    Parameters
    ----------
    draws : array_like, shape (m,)
        Finite simulated values.
    weights : array_like, shape (m,), optional
        Nonnegative weights with positive sum; rescaled to sum to one.
        ``None`` means equal weights.
    """

    draws: np.ndarray
    weights: Optional[np.ndarray] = None

    def __init__(self, draws, weights=None):
        x = np.asarray(draws, dtype=float)
        if x.ndim == 0:
            x = x.reshape(1)
        if x.ndim != 1 or x.size == 0:
            raise DimensionError(f"draws must be a non-empty vector, got shape {x.shape}")
        if not np.all(np.isfinite(x)):
            raise DomainError("draws must be finite")
        if weights is not None:
            w = np.asarray(weights, dtype=float).reshape(-1)
            if w.shape != x.shape:
                raise DimensionError(f"weights have shape {w.shape}, draws {x.shape}")
            if not np.all(np.isfinite(w)) or np.any(w < 0):
                raise DomainError("weights must be finite and nonnegative")
            total = w.sum()
            if not total > 0:
                raise DomainError("weights must have a positive sum")
            w = w / total
            w.setflags(write=False)
        else:
            w = None
        x = x.copy()
        x.setflags(write=False)
        object.__setattr__(self, "draws", x)
        object.__setattr__(self, "weights", w)

    @property
    def size(self):
        return self.draws.size

    @property
    def uniform(self):
        return self.weights is None

    def normalized_weights(self):
        if self.weights is None:
            return np.full(self.size, 1.0 / self.size)
        return self.weights


def _as_forecast(fc, weights=None):
    if isinstance(fc, SampleForecast):
        if weights is not None:
            return SampleForecast(fc.draws, weights)
        return fc
    return SampleForecast(fc, weights)


def _check_y(y):
    y = float(y)
    if not np.isfinite(y):
        raise DomainError(f"observation must be finite, got {y}")
    return y


def crps_sample_edf(y, fc, weights=None):
    """Exact CRPS of the empirical distribution of a sample.

    Parameters
    ----------
    y : float
        Observation.
    fc : SampleForecast or array_like
        The sample; a plain array is wrapped together with ``weights``.

    Returns
    -------
    float
        Nonnegative score; ``O(m log m)``.
    """
    y = _check_y(y)
    fc = _as_forecast(fc, weights)
    order = np.argsort(fc.draws, kind="stable")
    x = fc.draws[order]
    above = (y < x).astype(float)
    if fc.uniform:
        m = x.size
        i = np.arange(1, m + 1, dtype=float)
        val = 2.0 / (m * m) * float(np.sum((x - y) * (m * above - i + 0.5)))
    else:
        w = fc.weights[order]
        P = np.cumsum(w)
        val = 2.0 * float(np.sum(w * (x - y) * (above - P + 0.5 * w)))
    return max(val, 0.0)


def crps_sample_numint(y, fc, weights=None):
    """Diagnostic: CRPS of the EDF by piecewise integration of ``(F - 1{y <= x})^2``.

    Only meant for cross-checking :func:`crps_sample_edf`.
    """
    y = _check_y(y)
    fc = _as_forecast(fc, weights)
    x = fc.draws
    w = fc.normalized_weights()
    order = np.argsort(x, kind="stable")
    xs, ws = x[order], w[order]
    grid = np.union1d(xs, [y])

    def F(t):
        return float(ws[xs <= t].sum())

    total = 0.0
    for a, b in zip(grid[:-1], grid[1:]):
        ind = 1.0 if y <= a else 0.0
        total += integrate.quad(lambda t: (F(t) - ind) ** 2, a, b)[0]
    return total


def bandwidth_nrd(fc):
    """Normal reference bandwidth ``1.06 min(sd, IQR/1.349) m^(-1/5)``.

    The standard deviation uses divisor ``m - 1`` and the quartiles use linear
    interpolation between order statistics. Weights, if any, are ignored. When
    exactly one of the two spread measures is zero the other one is used.

    Raises
    ------
    DegenerateSampleError
        For fewer than two draws or when all draws are identical.
    """
    x = fc.draws if isinstance(fc, SampleForecast) else np.asarray(fc, dtype=float).reshape(-1)
    m = x.size
    if m < 2:
        raise DegenerateSampleError("bandwidth needs at least two draws")
    sd = float(np.std(x, ddof=1))
    q1, q3 = np.quantile(x, [0.25, 0.75], method="linear")
    iqr = float(q3 - q1) / _NRD_IQR_SCALE
    spread = [s for s in (sd, iqr) if s > 0]
    if not spread:
        raise DegenerateSampleError("all draws are identical; no bandwidth can be derived")
    return 1.06 * min(spread) * m ** -0.2


def _resolve_bw(fc, bw):
    if bw is None:
        return bandwidth_nrd(fc)
    bw = float(bw)
    if not (bw > 0 and np.isfinite(bw)):
        raise DomainError(f"bandwidth must be finite and > 0, got {bw}")
    return bw


def kde_mixture(fc, bw=None):
    """The Gaussian-kernel mixture induced by a sample."""
    fc = _as_forecast(fc)
    h = _resolve_bw(fc, bw)
    return MixtureNormalSpec(fc.draws, np.full(fc.size, h), fc.normalized_weights())


def crps_sample_kde(y, fc, bw=None, weights=None):
    """CRPS of the Gaussian kernel density estimate of a sample.

    Equal to :func:`~properscore.families.crps_mixnorm` on the mixture with
    means at the draws, common standard deviation ``bw`` and the sample
    weights. ``bw`` defaults to :func:`bandwidth_nrd`. Costs ``O(m^2)``.
    """
    y = _check_y(y)
    fc = _as_forecast(fc, weights)
    return crps_mixnorm(kde_mixture(fc, bw), y)


def logs_sample(y, fc, bw=None, weights=None):
    """Negative log of the Gaussian kernel density estimate at ``y``."""
    y = _check_y(y)
    fc = _as_forecast(fc, weights)
    h = _resolve_bw(fc, bw)
    r = (y - fc.draws) / h
    logk = -0.5 * r * r - LOG_SQRT_2PI - np.log(h)
    return -float(logsumexp(logk, b=fc.normalized_weights()))


def crps_sample(y, dat, method="edf", weights=None, bw=None):
    """Sample CRPS by method name (``"edf"`` or ``"kde"``)."""
    if method == "edf":
        return crps_sample_edf(y, dat, weights)
    if method == "kde":
        return crps_sample_kde(y, dat, bw, weights)
    raise ValueError(f"method must be 'edf' or 'kde', got {method!r}")
