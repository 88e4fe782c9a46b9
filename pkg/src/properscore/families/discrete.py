"""Closed-form CRPS and log scores for the discrete families.

Finite-support families (binomial, hypergeometric) use the weighted
order-statistic sum

    CRPS = 2 sum_x f(x) (1{y < x} - F(x) + f(x)/2) (x - y)

with the probability masses computed in log space, so that sizes well beyond
the range of the binomial coefficients in double precision are fine.
"""
import math

import numpy as np

from . import _checks
from .. import specfun as sf
from ..errors import DomainError


def _support_crps(y, xs, logpmf):
    pmf = np.exp(logpmf - np.max(logpmf))
    pmf /= pmf.sum()
    cdf = np.cumsum(pmf)
    cdf[-1] = 1.0
    ind = (y < xs).astype(float)
    return float(2.0 * np.sum(pmf * (ind - cdf + 0.5 * pmf) * (xs - y)))


def _is_int(y):
    return y == math.floor(y)


def _binom_logpmf(n, p):
    xs = np.arange(n + 1, dtype=float)
    if p == 0.0 or p == 1.0:
        out = np.full(n + 1, -np.inf)
        out[0 if p == 0.0 else n] = 0.0
        return xs, out
    lg = math.lgamma(n + 1.0)
    logc = np.array([lg - math.lgamma(k + 1.0) - math.lgamma(n - k + 1.0) for k in range(n + 1)])
    return xs, logc + xs * math.log(p) + (n - xs) * math.log1p(-p)


def _binom_args(y, size, prob):
    _checks.observation(y)
    n = _checks.count("size", size)
    _checks.in_unit("prob", prob)
    return n


def crps_binom(y, size, prob):
    n = _binom_args(y, size, prob)
    xs, lp = _binom_logpmf(n, prob)
    return _support_crps(y, xs, lp)


def logs_binom(y, size, prob):
    n = _binom_args(y, size, prob)
    if not _is_int(y) or y < 0 or y > n:
        return math.inf
    _, lp = _binom_logpmf(n, prob)
    return -float(lp[int(y)])


def _hyper_logpmf(m, n, k):
    lo, hi = max(0, k - n), min(k, m)
    xs = np.arange(lo, hi + 1, dtype=float)

    def lchoose(a, b):
        return math.lgamma(a + 1.0) - math.lgamma(b + 1.0) - math.lgamma(a - b + 1.0)

    total = lchoose(m + n, k)
    lp = np.array([lchoose(m, x) + lchoose(n, k - x) - total for x in range(lo, hi + 1)])
    return xs, lp


def _hyper_args(y, m, n, k):
    _checks.observation(y)
    m = _checks.count("m", m)
    n = _checks.count("n", n)
    k = _checks.count("k", k)
    if k > m + n:
        raise DomainError(f"need k <= m + n, got k={k}, m + n={m + n}")
    return m, n, k


def crps_hyper(y, m, n, k):
    m, n, k = _hyper_args(y, m, n, k)
    xs, lp = _hyper_logpmf(m, n, k)
    return _support_crps(y, xs, lp)


def logs_hyper(y, m, n, k):
    m, n, k = _hyper_args(y, m, n, k)
    xs, lp = _hyper_logpmf(m, n, k)
    if not _is_int(y) or y < xs[0] or y > xs[-1]:
        return math.inf
    return -float(lp[int(y - xs[0])])


def _nbinom_args(y, size, prob):
    _checks.observation(y)
    _checks.positive("size", size)
    _checks.in_unit("prob", prob, lo_open=True)


def _nbinom_cdf(x, n, p):
    if x < 0:
        return 0.0
    if p == 1.0:
        return 1.0
    return sf.inc_beta_pair(n, math.floor(x + 1.0), p, 1.0 - p)


def crps_nbinom(y, size, prob):
    _nbinom_args(y, size, prob)
    n, p = size, prob
    F = _nbinom_cdf(y, n, p)
    if p == 1.0:
        return y * (2.0 * F - 1.0)
    F1 = _nbinom_cdf(y - 1.0, n + 1.0, p)
    q = 1.0 - p
    hyp = sf.hyp2f1(n + 1.0, 0.5, 2.0, -4.0 * q / (p * p))
    return y * (2.0 * F - 1.0) - n * q / (p * p) * (p * (2.0 * F1 - 1.0) + hyp)


def logs_nbinom(y, size, prob):
    _nbinom_args(y, size, prob)
    if not _is_int(y) or y < 0:
        return math.inf
    n, p = size, prob
    if p == 1.0:
        return 0.0 if y == 0 else math.inf
    lp = (math.lgamma(y + n) - math.lgamma(n) - math.lgamma(y + 1.0)
          + n * math.log(p) + y * math.log1p(-p))
    return -lp


def _pois_args(y, lam):
    _checks.observation(y)
    _checks.positive("lambda", lam)


def _pois_logpmf(k, lam):
    return k * math.log(lam) - lam - math.lgamma(k + 1.0)


def crps_pois(y, lam):
    _pois_args(y, lam)
    if y >= 0:
        fl = math.floor(y)
        F = sf.reg_inc_gamma(fl + 1.0, lam, "upper")
        f = math.exp(_pois_logpmf(fl, lam))
    else:
        F = f = 0.0
    # exp(-2 lam) (I0 + I1)(2 lam) in scaled form
    bess = sf.bessel_i(0, 2.0 * lam, scaled=True) + sf.bessel_i(1, 2.0 * lam, scaled=True)
    return (y - lam) * (2.0 * F - 1.0) + 2.0 * lam * f - lam * bess


def logs_pois(y, lam):
    _pois_args(y, lam)
    if not _is_int(y) or y < 0:
        return math.inf
    return -_pois_logpmf(y, lam)
