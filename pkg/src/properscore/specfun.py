"""Special-function kernels used by the closed-form scores.

Everything here works on Python floats and relies only on :mod:`math`, with one
exception: :func:`std_normal_cdf` hands numpy arrays to ``scipy.special.ndtr``
so the normal-mixture scores can be evaluated in bulk.

Series and continued fractions are switched at the usual crossover points
(incomplete gamma: series below ``a + 1``; incomplete beta: continued fraction
on whichever side of the mean converges faster).
"""
import math

import numpy as np
from scipy import special as _sp

from .errors import ConvergenceError, DomainError

EULER_GAMMA = 0.57721566490153286061
SQRT_2 = math.sqrt(2.0)
SQRT_PI = math.sqrt(math.pi)
INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)
LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)

_EPS = 1e-16
_TINY = 1e-300
_MAX_ITER = 100_000


# --------------------------------------------------------------------------
# Gaussian
# --------------------------------------------------------------------------

def std_normal_pdf(x):
    """Standard normal density."""
    if isinstance(x, np.ndarray):
        return INV_SQRT_2PI * np.exp(-0.5 * x * x)
    return INV_SQRT_2PI * math.exp(-0.5 * x * x)


def std_normal_cdf(x):
    """Standard normal distribution function.

    Scalars go through ``erfc`` so that both tails keep full relative
    precision; arrays are delegated to ``scipy.special.ndtr``.
    """
    if isinstance(x, np.ndarray):
        return _sp.ndtr(x)
    return 0.5 * math.erfc(-x / SQRT_2)


def log_std_normal_pdf(x):
    return -LOG_SQRT_2PI - 0.5 * x * x


# --------------------------------------------------------------------------
# Gamma and beta functions
# --------------------------------------------------------------------------

def gamma_fn(x):
    return math.gamma(x)


def lgamma(x):
    return math.lgamma(x)


def lbeta(a, b):
    """Logarithm of the complete beta function, ``a, b > 0``."""
    return math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b)


def beta_fn(a, b):
    return math.exp(lbeta(a, b))


def _is_pole(x):
    return x <= 0 and x == math.floor(x)


def _lgamma_sign(x):
    """Return ``(log|Gamma(x)|, sign(Gamma(x)))`` for ``x`` off the poles."""
    if x > 0:
        return math.lgamma(x), 1.0
    sign = -1.0 if math.floor(-x) % 2 == 0 else 1.0
    return math.lgamma(x), sign


def _gamma_ratio(num, den, log_extra=0.0):
    """``prod Gamma(num) / prod Gamma(den) * exp(log_extra)``.

    A pole in the denominator makes the ratio vanish.
    """
    if any(_is_pole(d) for d in den):
        return 0.0
    total = log_extra
    sign = 1.0
    for v in num:
        if _is_pole(v):
            raise DomainError(f"gamma pole at {v} in numerator")
        lg, s = _lgamma_sign(v)
        total += lg
        sign *= s
    for v in den:
        lg, s = _lgamma_sign(v)
        total -= lg
        sign *= s
    return sign * math.exp(total)


# --------------------------------------------------------------------------
# Regularized incomplete gamma
# --------------------------------------------------------------------------

def _gamma_prefactor(a, x):
    return math.exp(a * math.log(x) - x - math.lgamma(a))


def _gamma_series(a, x):
    # lower tail, valid for x < a + 1
    ap = a
    term = total = 1.0 / a
    for _ in range(_MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _EPS:
            return total * _gamma_prefactor(a, x)
    raise ConvergenceError(f"incomplete gamma series failed for a={a}, x={x}")


def _gamma_cfrac(a, x):
    # upper tail by modified Lentz, valid for x >= a + 1
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h * _gamma_prefactor(a, x)
    raise ConvergenceError(f"incomplete gamma fraction failed for a={a}, x={x}")


def reg_inc_gamma(a, x, tail="lower"):
    """Regularized incomplete gamma function ``P(a, x)`` or ``Q(a, x)``.

    Parameters
    ----------
    a : float
        Shape, strictly positive.
    x : float
        Non-negative argument; ``inf`` is allowed.
    tail : {"lower", "upper"}
        Which tail to return.
    """
    if tail not in ("lower", "upper"):
        raise ValueError(f"tail must be 'lower' or 'upper', got {tail!r}")
    if not a > 0 or math.isinf(a):
        raise DomainError(f"incomplete gamma needs finite a > 0, got {a}")
    if not x >= 0:
        raise DomainError(f"incomplete gamma needs x >= 0, got {x}")
    if x == 0:
        lower, upper = 0.0, 1.0
    elif math.isinf(x):
        lower, upper = 1.0, 0.0
    elif x < a + 1.0:
        lower = _gamma_series(a, x)
        upper = 1.0 - lower
    else:
        upper = _gamma_cfrac(a, x)
        lower = 1.0 - upper
    return lower if tail == "lower" else upper


def upper_inc_gamma(a, x):
    """Unregularized upper incomplete gamma ``Gamma_u(a, x)`` for ``a > 0``."""
    return reg_inc_gamma(a, x, "upper") * math.gamma(a)


# --------------------------------------------------------------------------
# Regularized incomplete beta
# --------------------------------------------------------------------------

def _beta_cfrac(a, b, x):
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, _MAX_ITER):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h
    raise ConvergenceError(f"incomplete beta fraction failed for a={a}, b={b}, x={x}")


def inc_beta_pair(a, b, x, y):
    """``I(a, b, x)`` where the caller also supplies ``y = 1 - x`` exactly.

    Passing both arguments avoids the cancellation in ``1 - x`` when ``x`` is
    computed as a ratio close to one.
    """
    if x <= 0.0:
        return 0.0
    if y <= 0.0:
        return 1.0
    log_front = (math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
                 + a * math.log(x) + b * math.log(y))
    if x < (a + 1.0) / (a + b + 2.0):
        return math.exp(log_front) * _beta_cfrac(a, b, x) / a
    return 1.0 - math.exp(log_front) * _beta_cfrac(b, a, y) / b


def reg_inc_beta(a, b, x):
    """Regularized incomplete beta function ``I(a, b, x)``."""
    if not (a > 0 and b > 0) or math.isinf(a) or math.isinf(b):
        raise DomainError(f"incomplete beta needs finite a, b > 0, got a={a}, b={b}")
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"incomplete beta needs 0 <= x <= 1, got {x}")
    return inc_beta_pair(a, b, x, 1.0 - x)


# --------------------------------------------------------------------------
# Gauss hypergeometric function
# --------------------------------------------------------------------------

_PERTURB = 1e-4


def _hyp_series(a, b, c, x, max_terms=_MAX_ITER):
    total = 1.0
    term = 1.0
    settled = 0
    for k in range(max_terms):
        ratio = (a + k) * (b + k) / ((c + k) * (k + 1.0)) * x
        term *= ratio
        total += term
        if term == 0.0:
            return total
        if abs(term) <= _EPS * abs(total) and abs(ratio) < 1.0:
            settled += 1
            if settled >= 2:
                return total
        else:
            settled = 0
    raise ConvergenceError(f"2F1 series failed for a={a}, b={b}, c={c}, x={x}")


def _near_int(v):
    r = round(v)
    return r, v - r


def _interpolate_in_b(fn, b, b0):
    """Evaluate ``fn`` at ``b`` through a cubic through points around ``b0``.

    ``fn`` is analytic in ``b`` but its connection formula is 0/0 at ``b0``.
    """
    nodes = [b0 - 2 * _PERTURB, b0 - _PERTURB, b0 + _PERTURB, b0 + 2 * _PERTURB]
    vals = [fn(n) for n in nodes]
    out = 0.0
    for i, (ni, vi) in enumerate(zip(nodes, vals)):
        w = 1.0
        for j, nj in enumerate(nodes):
            if j != i:
                w *= (b - nj) / (ni - nj)
        out += w * vi
    return out


def _hyp_inverse(a, b, c, x):
    # x < -1: expansion in w = 1/(1 - x), valid while b - a is not an integer
    w = 1.0 / (1.0 - x)
    log1mx = math.log1p(-x)
    t1 = _gamma_ratio([c, b - a], [b, c - a], -a * log1mx)
    if t1 != 0.0:
        t1 *= _hyp_series(a, c - b, a - b + 1.0, w)
    t2 = _gamma_ratio([c, a - b], [a, c - b], -b * log1mx)
    if t2 != 0.0:
        t2 *= _hyp_series(b, c - a, b - a + 1.0, w)
    return t1 + t2


def _hyp_reflect(a, b, c, x):
    # 0.5 < x < 1: expansion in 1 - x, valid while c - a - b is not an integer
    w = 1.0 - x
    s = c - a - b
    t1 = _gamma_ratio([c, s], [c - a, c - b])
    if t1 != 0.0:
        t1 *= _hyp_series(a, b, 1.0 - s, w)
    t2 = _gamma_ratio([c, -s], [a, b], s * math.log(w))
    if t2 != 0.0:
        t2 *= _hyp_series(c - a, c - b, s + 1.0, w)
    return t1 + t2


def hyp2f1(a, b, c, x):
    """Gauss hypergeometric function ``2F1(a, b; c; x)`` for real ``x <= 1``.

    On ``(0, 0.5]`` the Gauss series is summed directly. On ``[-1, 0)`` a Pfaff
    transformation maps the argument into ``(0, 1/2]``; below ``-1`` the
    expansion in ``1/(1 - x)`` is used and on ``(0.5, 1)`` the expansion in
    ``1 - x``. Parameter values where a connection formula degenerates are
    handled by polynomial interpolation in ``b``.
    """
    if _is_pole(c):
        raise DomainError(f"2F1 undefined for c={c}")
    if not math.isfinite(x) or x > 1.0:
        raise DomainError(f"2F1 needs real x <= 1, got {x}")
    if x == 0.0 or a == 0.0 or b == 0.0:
        return 1.0
    if x == 1.0:
        if c - a - b <= 0:
            raise DomainError("2F1 diverges at x = 1 when c - a - b <= 0")
        return _gamma_ratio([c, c - a - b], [c - a, c - b])
    if 0.0 < x <= 0.5:
        return _hyp_series(a, b, c, x)
    if x < 0.0 and x >= -1.0:
        z = x / (x - 1.0)
        # pick the variant whose series has the fewer sign changes
        neg1 = max(0.0, -a) + max(0.0, b - c)
        neg2 = max(0.0, a - c) + max(0.0, -b)
        if neg1 <= neg2:
            return (1.0 - x) ** (-a) * _hyp_series(a, c - b, c, z)
        return (1.0 - x) ** (-b) * _hyp_series(c - a, b, c, z)
    if x < -1.0:
        k, d = _near_int(a - b)
        if abs(d) < _PERTURB:
            return _interpolate_in_b(lambda bb: _hyp_inverse(a, bb, c, x), b, a - k)
        return _hyp_inverse(a, b, c, x)
    k, d = _near_int(c - a - b)
    if abs(d) < _PERTURB:
        return _interpolate_in_b(lambda bb: _hyp_reflect(a, bb, c, x), b, c - a - k)
    return _hyp_reflect(a, b, c, x)


# --------------------------------------------------------------------------
# Modified Bessel functions of the first kind, orders 0 and 1
# --------------------------------------------------------------------------

_BESSEL_SERIES_MAX = 25.0


def _bessel_series(order, x):
    half = 0.5 * x
    q = half * half
    term = 1.0 if order == 0 else half
    total = term
    k = 0
    while True:
        k += 1
        term *= q / (k * (k + order))
        total += term
        if term <= total * _EPS:
            return total


def _bessel_asymptotic_scaled(order, x):
    mu = 4.0 * order * order
    term = 1.0
    total = 1.0
    k = 0
    while True:
        k += 1
        odd = 2 * k - 1
        nxt = -term * (mu - odd * odd) / (k * 8.0 * x)
        if abs(nxt) >= abs(term):
            break
        term = nxt
        total += term
        if abs(term) < _EPS * abs(total):
            break
    return total / math.sqrt(2.0 * math.pi * x)


def bessel_i(order, x, scaled=False):
    """Modified Bessel function ``I_0`` or ``I_1``.

    With ``scaled=True`` the result is ``exp(-x) * I_order(x)``, which stays
    finite for arguments where ``I_order`` itself overflows.
    """
    if order not in (0, 1):
        raise ValueError("only orders 0 and 1 are supported")
    if not x >= 0:
        raise DomainError(f"bessel_i needs x >= 0, got {x}")
    if math.isinf(x):
        return 0.0 if scaled else math.inf
    if x <= _BESSEL_SERIES_MAX:
        value = _bessel_series(order, x)
        return value * math.exp(-x) if scaled else value
    value = _bessel_asymptotic_scaled(order, x)
    if scaled:
        return value
    try:
        return value * math.exp(x)
    except OverflowError:
        return math.inf


# --------------------------------------------------------------------------
# Exponential integrals
# --------------------------------------------------------------------------

def expint_e1(x):
    """Exponential integral ``E1(x)`` for ``x > 0``."""
    if not x > 0:
        raise DomainError(f"E1 needs x > 0, got {x}")
    if math.isinf(x):
        return 0.0
    if x <= 1.0:
        total = 0.0
        term = 1.0
        k = 0
        while True:
            k += 1
            term *= -x / k
            contrib = term / k
            total += contrib
            if abs(contrib) < _EPS * abs(total):
                break
        return -EULER_GAMMA - math.log(x) - total
    b = x + 1.0
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER):
        an = -float(i * i)
        b += 2.0
        d = 1.0 / (an * d + b)
        c = b + an / c
        delta = c * d
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h * math.exp(-x)
    raise ConvergenceError(f"E1 continued fraction failed for x={x}")


_EI_SERIES_MAX = 40.0


def expint_ei(x):
    """Principal-value exponential integral ``Ei(x)``, ``x != 0``."""
    if x == 0 or math.isnan(x):
        raise DomainError("Ei is singular at x = 0")
    if x < 0:
        return -expint_e1(-x)
    if math.isinf(x):
        return math.inf
    if x <= _EI_SERIES_MAX:
        total = 0.0
        term = 1.0
        k = 0
        while True:
            k += 1
            term *= x / k
            contrib = term / k
            total += contrib
            if contrib < _EPS * total:
                break
        return EULER_GAMMA + math.log(x) + total
    total = 1.0
    term = 1.0
    k = 0
    while True:
        k += 1
        nxt = term * k / x
        if nxt >= term or nxt < _EPS * total:
            break
        term = nxt
        total += term
    try:
        return math.exp(x) / x * total
    except OverflowError:
        return math.inf
