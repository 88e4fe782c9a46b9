"""Scores for finite mixtures of normal distributions."""
from dataclasses import dataclass

import numpy as np
from scipy.special import erf, logsumexp

from .. import specfun as sf
from ..errors import DomainError

# entries of the pairwise block evaluated at once
_BLOCK = 1 << 21


@dataclass(frozen=True, eq=False)
class MixtureNormalSpec:
    """Mixture of ``M`` normal components.

    Parameters
    ----------
    means, sds, weights : array_like
        Component means, standard deviations (> 0) and weights (> 0). The
        weights are rescaled to sum to one on construction.
    """

    means: np.ndarray
    sds: np.ndarray
    weights: np.ndarray

    def __init__(self, means, sds, weights=None):
        m = np.atleast_1d(np.asarray(means, dtype=float))
        s = np.atleast_1d(np.asarray(sds, dtype=float))
        w = np.ones_like(m) if weights is None else np.atleast_1d(np.asarray(weights, dtype=float))
        if m.ndim != 1 or m.size == 0:
            raise DomainError("mixture needs at least one component")
        if s.size == 1 and m.size > 1:
            s = np.full_like(m, s[0])
        if not (m.shape == s.shape == w.shape):
            raise DomainError(f"component vectors differ in length: {m.size}, {s.size}, {w.size}")
        if not np.all(np.isfinite(m)):
            raise DomainError("mixture means must be finite")
        if not np.all((s > 0) & np.isfinite(s)):
            raise DomainError("mixture sds must be finite and > 0")
        if not np.all((w > 0) & np.isfinite(w)):
            raise DomainError("mixture weights must be finite and > 0")
        for name, arr in (("means", m), ("sds", s), ("weights", w / w.sum())):
            arr = arr.copy()
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def __len__(self):
        return self.means.size


def _A(mu, var):
    # A(mu, s^2) = mu (2 Phi(mu/s) - 1) + 2 s phi(mu/s)
    s = np.sqrt(var)
    r = mu / s
    return mu * erf(r / sf.SQRT_2) + 2.0 * s * sf.INV_SQRT_2PI * np.exp(-0.5 * r * r)


def _pair_term(m, v, w):
    """``sum_i sum_j w_i w_j A(m_i - m_j, v_i + v_j)``.

    The kernel is symmetric, so each row chunk is paired only with itself and
    the columns after it; the off-diagonal part counts twice.
    """
    n = m.size
    rows = max(1, _BLOCK // n)
    total = 0.0
    for start in range(0, n, rows):
        stop = min(start + rows, n)
        d = m[start:stop, None] - m[None, start:]
        var = v[start:stop, None] + v[None, start:]
        block = _A(d, var)
        wr = w[start:stop]
        k = stop - start
        total += float(wr @ block[:, :k] @ wr)
        if stop < n:
            total += 2.0 * float(wr @ (block[:, k:] @ w[stop:]))
    return total


def crps_mixnorm(spec, y):
    """CRPS of a normal mixture at ``y``; costs ``O(M^2)``."""
    if not np.isfinite(y):
        raise DomainError(f"observation must be finite, got {y}")
    m, s, w = spec.means, spec.sds, spec.weights
    v = s * s
    first = float(w @ _A(y - m, v))
    return first - 0.5 * _pair_term(m, v, w)


def logs_mixnorm(spec, y):
    """Negative log density of a normal mixture at ``y`` (log-sum-exp)."""
    if not np.isfinite(y):
        raise DomainError(f"observation must be finite, got {y}")
    r = (y - spec.means) / spec.sds
    logdens = -0.5 * r * r - np.log(spec.sds) - sf.LOG_SQRT_2PI
    return -float(logsumexp(logdens, b=spec.weights))
