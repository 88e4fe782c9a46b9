"""Truncated, censored and generalized truncated/censored location-scale families.

All nine variants (``t``/``c``/``gtc`` over the logistic, normal and Student t
bases) share one closed form. With ``z`` the observation clipped to
``[l, u]``, ``D = F(u) - F(l)``, ``w = 1 - L - U`` and ``c = w / D``::

    CRPS = |y - z| + u U^2 - l L^2
           + z (2 c (F(z) - F(l)) - (1 - 2L))
           + 2 c (g(z) - U g(u) - L g(l))
           - c^2 K(l, u)

where ``g`` and ``K`` are supplied by the base (see :mod:`._bases`).
Censoring is the special case ``L = F(l)``, ``U = 1 - F(u)``, for which
``c = 1`` exactly; truncation is ``L = U = 0``.
"""
import math

from . import _checks
from ._bases import LOGISTIC, NORMAL, StudentBase
from ..errors import DomainError


def _mass_term(bound, mass):
    # u U^2 with the convention 0 * inf = 0
    return bound * mass * mass if mass > 0 else 0.0


def gtc_standard(base, y, l, u, L, U, censored=False):
    """CRPS of the standardized generalized truncated/censored distribution."""
    z = min(max(y, l), u)
    if censored:
        L = base.cdf(l)
        U = base.sf(u)
        D = base.diff(l, u)
        w = D
        c = 1.0
    else:
        D = base.diff(l, u)
        w = 1.0 - L - U
        c = w / D
    if not D > 0:
        raise DomainError(f"interval [{l}, {u}] carries no probability under the base distribution")
    res = abs(y - z) + _mass_term(u, U) - _mass_term(l, L)
    # 2 c z F(z) - z ((1 - 2L) F(u) + (1 - 2U) F(l)) / D, rearranged so that no
    # large multiple of c cancels when [l, u] sits in a far tail
    res += z * (2.0 * c * base.diff(l, z) - (1.0 - 2.0 * L))
    res += 2.0 * c * (base.g(z) - (U * base.g(u) if U > 0 else 0.0)
                      - (L * base.g(l) if L > 0 else 0.0))
    res -= c * c * base.kdiff(l, u)
    # the exact score is nonnegative; clamp round-off at the origin
    return max(res, 0.0)


def _standardize(location, scale, lower, upper):
    _checks.finite("location", location)
    _checks.positive("scale", scale)
    _checks.bounds(lower, upper)
    return (lower - location) / scale, (upper - location) / scale


def _crps(base, y, location, scale, lower, upper, lmass, umass, censored):
    _checks.observation(y)
    a, b = _standardize(location, scale, lower, upper)
    if not censored:
        _checks.masses(lmass, umass, lower, upper)
    return scale * gtc_standard(base, (y - location) / scale, a, b, lmass, umass, censored)


def _logs_trunc(base, y, location, scale, lower, upper):
    _checks.observation(y)
    a, b = _standardize(location, scale, lower, upper)
    if y < lower or y > upper:
        return math.inf
    D = base.diff(a, b)
    if not D > 0:
        raise DomainError(f"interval [{lower}, {upper}] carries no probability")
    return math.log(scale) + math.log(D) - base.log_pdf((y - location) / scale)


def _t_base(df):
    base = StudentBase(df)
    base.require_mean()
    return base


# logistic ------------------------------------------------------------------

def crps_gtclogis(y, location=0.0, scale=1.0, lower=-math.inf, upper=math.inf,
                  lmass=0.0, umass=0.0):
    return _crps(LOGISTIC, y, location, scale, lower, upper, lmass, umass, False)


def crps_tlogis(y, location=0.0, scale=1.0, lower=-math.inf, upper=math.inf):
    return _crps(LOGISTIC, y, location, scale, lower, upper, 0.0, 0.0, False)


def crps_clogis(y, location=0.0, scale=1.0, lower=-math.inf, upper=math.inf):
    return _crps(LOGISTIC, y, location, scale, lower, upper, 0.0, 0.0, True)


def logs_tlogis(y, location=0.0, scale=1.0, lower=-math.inf, upper=math.inf):
    return _logs_trunc(LOGISTIC, y, location, scale, lower, upper)


# normal --------------------------------------------------------------------

def crps_gtcnorm(y, location=0.0, scale=1.0, lower=-math.inf, upper=math.inf,
                 lmass=0.0, umass=0.0):
    return _crps(NORMAL, y, location, scale, lower, upper, lmass, umass, False)


def crps_tnorm(y, location=0.0, scale=1.0, lower=-math.inf, upper=math.inf):
    return _crps(NORMAL, y, location, scale, lower, upper, 0.0, 0.0, False)


def crps_cnorm(y, location=0.0, scale=1.0, lower=-math.inf, upper=math.inf):
    return _crps(NORMAL, y, location, scale, lower, upper, 0.0, 0.0, True)


def logs_tnorm(y, location=0.0, scale=1.0, lower=-math.inf, upper=math.inf):
    return _logs_trunc(NORMAL, y, location, scale, lower, upper)


# Student t -----------------------------------------------------------------

def crps_gtct(y, df, location=0.0, scale=1.0, lower=-math.inf, upper=math.inf,
              lmass=0.0, umass=0.0):
    return _crps(_t_base(df), y, location, scale, lower, upper, lmass, umass, False)


def crps_tt(y, df, location=0.0, scale=1.0, lower=-math.inf, upper=math.inf):
    return _crps(_t_base(df), y, location, scale, lower, upper, 0.0, 0.0, False)


def crps_ct(y, df, location=0.0, scale=1.0, lower=-math.inf, upper=math.inf):
    return _crps(_t_base(df), y, location, scale, lower, upper, 0.0, 0.0, True)


def logs_tt(y, df, location=0.0, scale=1.0, lower=-math.inf, upper=math.inf):
    return _logs_trunc(StudentBase(df), y, location, scale, lower, upper)
