"""Energy score and variogram score for multivariate sample forecasts.

A forecast case is a ``d x m`` matrix whose columns are the simulated
vectors. Both scores take one case at a time; batching over cases is left to
the caller (see :mod:`properscore.cli`).
"""
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, DomainError

# pairwise blocks are processed in chunks of at most this many entries
_BLOCK = 1 << 21


@dataclass(frozen=True, eq=False)
class MultivariateForecast:
    """``d x m`` matrix of draws; column ``j`` is the sample ``X_j``."""

    draws: np.ndarray

    def __init__(self, draws):
        x = np.array(draws, dtype=float, ndmin=2)
        if x.ndim != 2 or x.shape[0] < 1 or x.shape[1] < 1:
            raise DimensionError(f"draws must be a non-empty d x m matrix, got shape {x.shape}")
        if not np.all(np.isfinite(x)):
            raise DomainError("draws must be finite")
        x.setflags(write=False)
        object.__setattr__(self, "draws", x)

    @property
    def dim(self):
        return self.draws.shape[0]

    @property
    def size(self):
        return self.draws.shape[1]


def _prepare(y, fc):
    if not isinstance(fc, MultivariateForecast):
        fc = MultivariateForecast(fc)
    y = np.asarray(y, dtype=float).reshape(-1)
    if y.size != fc.dim:
        raise DimensionError(f"observation has length {y.size}, forecast dimension is {fc.dim}")
    if not np.all(np.isfinite(y)):
        raise DomainError("observation must be finite")
    return y, fc


def es_sample(y, fc):
    """Energy score ``(1/m) sum ||X_i - y|| - (1/2m^2) sum_ij ||X_i - X_j||``.

    Parameters
    ----------
    y : array_like, shape (d,)
    fc : MultivariateForecast or array_like, shape (d, m)

    Returns
    -------
    float
    """
    y, fc = _prepare(y, fc)
    X = fc.draws.T                      # m x d, rows are samples
    m = X.shape[0]
    term1 = float(np.sum(np.sqrt(np.sum((X - y) ** 2, axis=1)))) / m
    rows = max(1, _BLOCK // max(1, m * X.shape[1]))
    pair = 0.0
    for start in range(0, m, rows):
        blk = X[start:start + rows]
        diff = blk[:, None, :] - X[None, :, :]
        pair += float(np.sum(np.sqrt(np.sum(diff * diff, axis=2))))
    return max(term1 - pair / (2.0 * m * m), 0.0)


def _abs_pow(a, p):
    a = np.abs(a)
    if p == 1.0:
        return a
    if p == 0.5:
        return np.sqrt(a)
    if p == 2.0:
        return a * a
    return a ** p


def vs_sample(y, fc, w=None, p=0.5):
    """Variogram score of order ``p``.

    ``sum_ij w_ij (|y_i - y_j|^p - (1/m) sum_k |X_k,i - X_k,j|^p)^2``.

    Parameters
    ----------
    y : array_like, shape (d,)
    fc : MultivariateForecast or array_like, shape (d, m)
    w : array_like, shape (d, d), optional
        Nonnegative pair weights; all ones by default.
    p : float
        Order, ``> 0``.
    """
    y, fc = _prepare(y, fc)
    p = float(p)
    if not (p > 0 and np.isfinite(p)):
        raise DomainError(f"order p must be finite and > 0, got {p}")
    d = fc.dim
    if w is None:
        W = np.ones((d, d))
    else:
        W = np.asarray(w, dtype=float)
        if W.shape != (d, d):
            raise DimensionError(f"weight matrix must be {d} x {d}, got shape {W.shape}")
        if not np.all(np.isfinite(W)) or np.any(W < 0):
            raise DomainError("pair weights must be finite and nonnegative")
    X = fc.draws
    m = fc.size
    vy = _abs_pow(y[:, None] - y[None, :], p)
    vx = np.zeros((d, d))
    cols = max(1, _BLOCK // (d * d))
    for start in range(0, m, cols):
        blk = X[:, start:start + cols]
        vx += _abs_pow(blk[:, None, :] - blk[None, :, :], p).sum(axis=2)
    vx /= m
    return float(np.sum(W * (vy - vx) ** 2))
