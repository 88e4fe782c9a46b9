"""Closed-form CRPS and log scores for the continuous parametric families.

Location-scale families are evaluated in standardized form and rescaled,
``CRPS(F_{mu,sigma}, y) = sigma * CRPS(F, (y - mu) / sigma)``.
"""
import math

from . import _checks
from ._bases import LOGISTIC, NORMAL, StudentBase, softplus
from .censored import gtc_standard
from .. import specfun as sf
from ..errors import NonFiniteScoreError, UnavailableScoreError

_GEV_XI_ZERO = 1e-8


def _std(y, location, scale):
    _checks.observation(y)
    _checks.finite("location", location)
    _checks.positive("scale", scale)
    return (y - location) / scale


# ---------------------------------------------------------------------------
# real line
# ---------------------------------------------------------------------------

def crps_lapl(y, location=0.0, scale=1.0):
    x = _std(y, location, scale)
    return scale * (abs(x) + math.exp(-abs(x)) - 0.75)


def logs_lapl(y, location=0.0, scale=1.0):
    x = _std(y, location, scale)
    return math.log(2.0 * scale) + abs(x)


def crps_logis(y, location=0.0, scale=1.0):
    x = _std(y, location, scale)
    # x - 2 log F(x) - 1 with log F(x) = -softplus(-x)
    return scale * (x + 2.0 * softplus(-x) - 1.0)


def logs_logis(y, location=0.0, scale=1.0):
    x = _std(y, location, scale)
    return math.log(scale) - LOGISTIC.log_pdf(x)


def crps_norm(y, mean=0.0, sd=1.0):
    x = _std(y, mean, sd)
    return sd * (x * (2.0 * sf.std_normal_cdf(x) - 1.0)
                 + 2.0 * sf.std_normal_pdf(x) - 1.0 / sf.SQRT_PI)


def logs_norm(y, mean=0.0, sd=1.0):
    x = _std(y, mean, sd)
    return math.log(sd) + sf.LOG_SQRT_2PI + 0.5 * x * x


def crps_t(y, df, location=0.0, scale=1.0):
    x = _std(y, location, scale)
    base = StudentBase(df)
    base.require_mean()
    nu = df
    return scale * (x * (2.0 * base.cdf(x) - 1.0)
                    + 2.0 * base.pdf(x) * (nu + x * x) / (nu - 1.0) - base.bbar())


def logs_t(y, df, location=0.0, scale=1.0):
    x = _std(y, location, scale)
    return math.log(scale) - StudentBase(df).log_pdf(x)


def _two_piece_args(y, location, scale1, scale2):
    _checks.observation(y)
    _checks.finite("location", location)
    _checks.positive("scale1", scale1)
    _checks.positive("scale2", scale2)
    return y - location


def crps_2pexp(y, location=0.0, scale1=1.0, scale2=1.0):
    x = _two_piece_args(y, location, scale1, scale2)
    s1, s2 = scale1, scale2
    s = s1 if x < 0 else s2
    tot = s1 + s2
    return (abs(x) + 2.0 * s * s / tot * math.expm1(-abs(x) / s)
            + (s1 ** 3 + s2 ** 3) / (2.0 * tot * tot))


def logs_2pexp(y, location=0.0, scale1=1.0, scale2=1.0):
    x = _two_piece_args(y, location, scale1, scale2)
    s = scale1 if x < 0 else scale2
    return math.log(scale1 + scale2) + abs(x) / s


def crps_2pnorm(y, location=0.0, scale1=1.0, scale2=1.0):
    x = _two_piece_args(y, location, scale1, scale2)
    s1, s2 = scale1, scale2
    tot = s1 + s2
    left = gtc_standard(NORMAL, min(0.0, x) / s1, -math.inf, 0.0, 0.0, s2 / tot)
    right = gtc_standard(NORMAL, max(0.0, x) / s2, 0.0, math.inf, s1 / tot, 0.0)
    return s1 * left + s2 * right


def logs_2pnorm(y, location=0.0, scale1=1.0, scale2=1.0):
    x = _two_piece_args(y, location, scale1, scale2)
    s = scale1 if x < 0 else scale2
    return math.log(0.5 * (scale1 + scale2)) + sf.LOG_SQRT_2PI + 0.5 * (x / s) ** 2


# ---------------------------------------------------------------------------
# non-negative support
# ---------------------------------------------------------------------------

def crps_exp(y, rate=1.0):
    _checks.observation(y)
    _checks.positive("rate", rate)
    F = -math.expm1(-rate * y) if y >= 0 else 0.0
    return abs(y) - 2.0 * F / rate + 0.5 / rate


def logs_exp(y, rate=1.0):
    _checks.observation(y)
    _checks.positive("rate", rate)
    if y < 0:
        return math.inf
    return rate * y - math.log(rate)


def _gamma_args(y, shape, rate):
    _checks.observation(y)
    _checks.positive("shape", shape)
    _checks.positive("rate", rate)


def crps_gamma(y, shape, rate=1.0):
    _gamma_args(y, shape, rate)
    if y > 0:
        F = sf.reg_inc_gamma(shape, rate * y)
        F1 = sf.reg_inc_gamma(shape + 1.0, rate * y)
    else:
        F = F1 = 0.0
    return (y * (2.0 * F - 1.0) - shape / rate * (2.0 * F1 - 1.0)
            - 1.0 / (rate * sf.beta_fn(0.5, shape)))


def logs_gamma(y, shape, rate=1.0):
    _gamma_args(y, shape, rate)
    if y < 0:
        return math.inf
    if y == 0:
        if shape == 1.0:
            return -math.log(rate)
        return math.inf if shape > 1.0 else -math.inf
    return -(shape * math.log(rate) + (shape - 1.0) * math.log(y) - rate * y - math.lgamma(shape))


def _loglike_args(y, locationlog, scalelog, crps):
    _checks.observation(y)
    _checks.finite("locationlog", locationlog)
    _checks.positive("scalelog", scalelog)
    if crps and scalelog >= 1:
        raise NonFiniteScoreError(f"CRPS is infinite for scalelog={scalelog} >= 1")


def crps_llapl(y, locationlog=0.0, scalelog=1.0):
    _loglike_args(y, locationlog, scalelog, True)
    mu, s = locationlog, scalelog
    if y <= 0:
        F, A = 0.0, 1.0 / (1.0 + s)
    else:
        x = (math.log(y) - mu) / s
        if x < 0:
            F = 0.5 * math.exp(x)
            A = -math.expm1((1.0 + s) * x) / (1.0 + s)
        else:
            F = 1.0 - 0.5 * math.exp(-x)
            A = math.expm1(-(1.0 - s) * x) / (1.0 - s)
    return y * (2.0 * F - 1.0) + math.exp(mu) * (s / (4.0 - s * s) + A)


def logs_llapl(y, locationlog=0.0, scalelog=1.0):
    _loglike_args(y, locationlog, scalelog, False)
    if y <= 0:
        return math.inf
    ly = math.log(y)
    return math.log(2.0 * scalelog) + ly + abs(ly - locationlog) / scalelog


def crps_llogis(y, locationlog=0.0, scalelog=1.0):
    _loglike_args(y, locationlog, scalelog, True)
    mu, s = locationlog, scalelog
    if y <= 0:
        F, S = 0.0, 1.0
    else:
        x = (math.log(y) - mu) / s
        F, S = LOGISTIC.cdf(x), LOGISTIC.sf(x)
    ib = sf.inc_beta_pair(1.0 + s, 1.0 - s, F, S)
    return y * (2.0 * F - 1.0) - math.exp(mu + sf.lbeta(1.0 + s, 1.0 - s)) * (2.0 * ib + s - 1.0)


def logs_llogis(y, locationlog=0.0, scalelog=1.0):
    _loglike_args(y, locationlog, scalelog, False)
    if y <= 0:
        return math.inf
    ly = math.log(y)
    return math.log(scalelog) + ly - LOGISTIC.log_pdf((ly - locationlog) / scalelog)


def crps_lnorm(y, locationlog=0.0, scalelog=1.0):
    _loglike_args(y, locationlog, scalelog, False)
    mu, s = locationlog, scalelog
    if y > 0:
        x = (math.log(y) - mu) / s
        F = sf.std_normal_cdf(x)
        P = sf.std_normal_cdf(x - s)
    else:
        F = P = 0.0
    return y * (2.0 * F - 1.0) - 2.0 * math.exp(mu + 0.5 * s * s) * (
        P - sf.std_normal_cdf(-s / sf.SQRT_2))


def logs_lnorm(y, locationlog=0.0, scalelog=1.0):
    _loglike_args(y, locationlog, scalelog, False)
    if y <= 0:
        return math.inf
    ly = math.log(y)
    return math.log(scalelog) + ly + sf.LOG_SQRT_2PI + 0.5 * ((ly - locationlog) / scalelog) ** 2


# ---------------------------------------------------------------------------
# flexible support and point masses
# ---------------------------------------------------------------------------

def _beta_args(y, shape1, shape2, lower, upper):
    _checks.observation(y)
    _checks.positive("shape1", shape1)
    _checks.positive("shape2", shape2)
    _checks.finite("lower", lower)
    _checks.finite("upper", upper)
    _checks.bounds(lower, upper)
    return (y - lower) / (upper - lower)


def crps_beta(y, shape1, shape2, lower=0.0, upper=1.0):
    x = _beta_args(y, shape1, shape2, lower, upper)
    a, b = shape1, shape2
    if x <= 0:
        F = F1 = 0.0
    elif x >= 1:
        F = F1 = 1.0
    else:
        F = sf.inc_beta_pair(a, b, x, 1.0 - x)
        F1 = sf.inc_beta_pair(a + 1.0, b, x, 1.0 - x)
    c = 2.0 * math.exp(sf.lbeta(2.0 * a, 2.0 * b) - 2.0 * sf.lbeta(a, b)) / a
    std = x * (2.0 * F - 1.0) + a / (a + b) * (1.0 - 2.0 * F1 - c)
    return (upper - lower) * std


def logs_beta(y, shape1, shape2, lower=0.0, upper=1.0):
    x = _beta_args(y, shape1, shape2, lower, upper)
    if x < 0 or x > 1:
        return math.inf
    a, b = shape1, shape2
    width = math.log(upper - lower)
    if x == 0 or x == 1:
        e = a if x == 0 else b
        if e == 1.0:
            return width + sf.lbeta(a, b)
        return -math.inf if e < 1.0 else math.inf
    return width + sf.lbeta(a, b) - (a - 1.0) * math.log(x) - (b - 1.0) * math.log1p(-x)


def _unif_args(y, lo, hi, lmass, umass):
    _checks.observation(y)
    _checks.finite("min", lo)
    _checks.finite("max", hi)
    _checks.bounds(lo, hi)
    _checks.masses(lmass, umass)
    return (y - lo) / (hi - lo)


def crps_unif(y, lo=0.0, hi=1.0, lmass=0.0, umass=0.0):
    x = _unif_args(y, lo, hi, lmass, umass)
    L, U = lmass, umass
    w = 1.0 - L - U
    # F is the CDF of the plain uniform; the masses enter through L, U only
    F = min(max(x, 0.0), 1.0)
    std = abs(x - F) + F * F * w - F * (1.0 - 2.0 * L) + w * w / 3.0 + (1.0 - L) * U
    return (hi - lo) * std


def logs_unif(y, lo=0.0, hi=1.0, lmass=0.0, umass=0.0):
    x = _unif_args(y, lo, hi, lmass, umass)
    if lmass > 0 or umass > 0:
        raise UnavailableScoreError("LogS unavailable for the uniform family with boundary point masses")
    if x < 0 or x > 1:
        return math.inf
    return math.log(hi - lo)


def logs_exp2(y, location=0.0, scale=1.0):
    x = _std(y, location, scale)
    if x < 0:
        return math.inf
    return math.log(scale) + x


def crps_expM(y, location=0.0, scale=1.0, mass=0.0):
    x = _std(y, location, scale)
    _checks.in_unit("mass", mass)
    F = -math.expm1(-x) if x >= 0 else 0.0
    w = 1.0 - mass
    return scale * (abs(x) - 2.0 * w * F + 0.5 * w * w)


def _gev_args(y, location, scale, shape):
    x = _std(y, location, scale)
    _checks.finite("shape", shape)
    return x


def _gev_t(x, xi):
    """``t = -log F(x)`` and support flags for the standard GEV."""
    if abs(xi) < _GEV_XI_ZERO:
        return math.exp(-x)
    arg = 1.0 + xi * x
    if arg <= 0:
        # below the lower endpoint (xi > 0) or above the upper one (xi < 0)
        return math.inf if xi > 0 else 0.0
    return math.exp(-math.log(arg) / xi)


def crps_gev(y, location=0.0, scale=1.0, shape=0.0):
    x = _gev_args(y, location, scale, shape)
    xi = shape
    if xi >= 1:
        raise NonFiniteScoreError(f"CRPS is infinite for GEV shape={xi} >= 1")
    if abs(xi) < _GEV_XI_ZERO:
        t = math.exp(-x)
        # -y - 2 Ei(log F) + gamma - log 2, with log F = -t
        std = -x - 2.0 * sf.expint_ei(-t) + sf.EULER_GAMMA - math.log(2.0)
        return scale * std
    t = _gev_t(x, xi)
    if t == math.inf:
        F, G = 0.0, 0.0
    elif t == 0.0:
        F = 1.0
        G = (math.gamma(1.0 - xi) - 1.0) / xi
    else:
        F = math.exp(-t)
        G = (-F + sf.upper_inc_gamma(1.0 - xi, t)) / xi
    const = (1.0 - (2.0 - 2.0 ** xi) * math.gamma(1.0 - xi)) / xi
    return scale * (x * (2.0 * F - 1.0) - 2.0 * G - const)


def logs_gev(y, location=0.0, scale=1.0, shape=0.0):
    x = _gev_args(y, location, scale, shape)
    xi = shape
    if abs(xi) < _GEV_XI_ZERO:
        return math.log(scale) + x + math.exp(-x)
    arg = 1.0 + xi * x
    if arg <= 0:
        return math.inf
    log_t = -math.log(arg) / xi
    return math.log(scale) - (xi + 1.0) * log_t + math.exp(log_t)


def _gpd_s(x, xi):
    """``-log(1 - F(x))`` for the standard GPD on its support, ``inf`` beyond it."""
    if abs(xi) < _GEV_XI_ZERO:
        return x
    arg = xi * x
    if arg <= -1.0:
        return math.inf
    return math.log1p(arg) / xi


def crps_gpd(y, location=0.0, scale=1.0, shape=0.0, mass=0.0):
    x = _std(y, location, scale)
    _checks.finite("shape", shape)
    _checks.in_unit("mass", mass)
    xi = shape
    if xi >= 1:
        raise NonFiniteScoreError(f"CRPS is infinite for GPD shape={xi} >= 1")
    w = 1.0 - mass
    if x < 0:
        bracket = 0.0
    else:
        s = _gpd_s(x, xi)
        # 1 - (1 - F)^(1 - xi)
        bracket = 1.0 if s == math.inf else -math.expm1(-(1.0 - xi) * s)
    return scale * (abs(x) - 2.0 * w / (1.0 - xi) * bracket + w * w / (2.0 - xi))


def logs_gpd(y, location=0.0, scale=1.0, shape=0.0, mass=0.0):
    x = _std(y, location, scale)
    _checks.finite("shape", shape)
    _checks.in_unit("mass", mass)
    if mass > 0:
        raise UnavailableScoreError("LogS unavailable for the generalized Pareto family with a point mass")
    if x < 0:
        return math.inf
    s = _gpd_s(x, shape)
    if s == math.inf:
        return math.inf
    return math.log(scale) + (1.0 + shape) * s
