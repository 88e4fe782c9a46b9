"""Standardized symmetric base distributions (logistic, normal, Student t).

Each base bundles the pieces that the truncated/censored CRPS formulas and
their derivatives are assembled from:

``cdf``/``sf``
    distribution and survival function, each accurate in its own tail;
``pdf``/``dpdf``
    density and its derivative;
``g``
    ``Q1(x) - x F(x)`` where ``Q1(x) = int_{-inf}^x F``;
``kdiff(l, u)``
    the boundary term multiplying the squared normalizing constant;
``q1``/``q2``
    ``int_{-inf}^x F`` and ``int_{-inf}^x F^2``.

All three bases are symmetric about zero, so ``sf(x) == cdf(-x)``.
"""
import math

from .. import specfun as sf_
from ..errors import DomainError, NonFiniteScoreError


def softplus(x):
    """``log(1 + exp(x))`` without overflow."""
    if x > 0:
        return x + math.log1p(math.exp(-x))
    return math.log1p(math.exp(x))


def log_logistic_cdf(x):
    return -softplus(-x)


def _e_minus_log1p(e):
    """``e - log(1 + e)`` without cancellation for small ``e``."""
    if e > 0.5:
        return e - math.log1p(e)
    # alternating series sum_{k>=2} (-1)^k e^k / k
    term = e * e
    total = 0.0
    k = 2
    while True:
        add = term / k
        total += add if k % 2 == 0 else -add
        if add < 1e-17 * total:
            return total
        term *= e
        k += 1


class _Symmetric:
    name = ""

    def sf(self, x):
        return self.cdf(-x)

    def diff(self, l, u):
        """``F(u) - F(l)`` evaluated in whichever tail keeps precision."""
        if l >= 0:
            return self.sf(l) - self.sf(u)
        return self.cdf(u) - self.cdf(l)

    def q1(self, x):
        if x == -math.inf:
            return 0.0
        return x * self.cdf(x) + self.g(x)


class NormalBase(_Symmetric):
    name = "norm"

    def cdf(self, x):
        if math.isinf(x):
            return 0.0 if x < 0 else 1.0
        return sf_.std_normal_cdf(x)

    def pdf(self, x):
        if math.isinf(x):
            return 0.0
        return sf_.std_normal_pdf(x)

    def dpdf(self, x):
        if math.isinf(x):
            return 0.0
        return -x * sf_.std_normal_pdf(x)

    def log_pdf(self, x):
        return sf_.log_std_normal_pdf(x)

    def psi(self, x):
        # -f'/f
        return x

    def g(self, x):
        return self.pdf(x)

    def kdiff(self, l, u):
        return self.diff(l * sf_.SQRT_2, u * sf_.SQRT_2) / sf_.SQRT_PI

    def q2(self, x):
        if x == -math.inf:
            return 0.0
        p = self.cdf(x)
        return x * p * p + 2.0 * self.pdf(x) * p - self.cdf(x * sf_.SQRT_2) / sf_.SQRT_PI


class LogisticBase(_Symmetric):
    name = "logis"

    def cdf(self, x):
        if x == math.inf:
            return 1.0
        if x == -math.inf:
            return 0.0
        if x >= 0:
            return 1.0 / (1.0 + math.exp(-x))
        e = math.exp(x)
        return e / (1.0 + e)

    def pdf(self, x):
        if math.isinf(x):
            return 0.0
        e = math.exp(-abs(x))
        return e / (1.0 + e) ** 2

    def dpdf(self, x):
        return self.pdf(x) * (self.sf(x) - self.cdf(x))

    def log_pdf(self, x):
        return -abs(x) - 2.0 * math.log1p(math.exp(-abs(x)))

    def psi(self, x):
        return self.cdf(x) - self.sf(x)

    def g(self, x):
        # -G(x) with G(x) = x F(x) + log F(-x)
        if math.isinf(x):
            return 0.0
        return -x * self.cdf(x) + softplus(x)

    def _h(self, x):
        """``H(x) = F - x F^2 + (1 - 2F) log F(-x)``; note ``1 - H(x) = H(-x)``."""
        if x == math.inf:
            return 1.0
        if x == -math.inf:
            return 0.0
        if x > 0:
            return 1.0 - self._h(-x)
        # with e = exp(x): H (1 + e) = (e - log1p(e)) + e log1p(e) - x e^2 / (1 + e),
        # a sum of nonnegative terms on the negative half-line
        e = math.exp(x)
        num = _e_minus_log1p(e) + e * math.log1p(e) - x * e * e / (1.0 + e)
        return num / (1.0 + e)

    def kdiff(self, l, u):
        if l >= 0:
            return self._h(-l) - self._h(-u)
        return self._h(u) - self._h(l)

    def q1(self, x):
        if x == -math.inf:
            return 0.0
        return softplus(x)

    def q2(self, x):
        if x == -math.inf:
            return 0.0
        if x > 0:
            return softplus(x) - self.cdf(x)
        # log1p(e) - e/(1 + e) = (e log1p(e) - (e - log1p(e))) / (1 + e)
        e = math.exp(x)
        return (e * math.log1p(e) - _e_minus_log1p(e)) / (1.0 + e)


class StudentBase(_Symmetric):
    """Standard Student t with ``df`` degrees of freedom.

    The distribution function is evaluated through the incomplete beta
    function, which is equivalent to the hypergeometric representation and
    keeps full relative precision in both tails.
    """

    name = "t"

    def __init__(self, df):
        if not df > 0 or math.isinf(df):
            raise DomainError(f"df must be finite and > 0, got {df}")
        self.df = df
        self._log_norm = -0.5 * math.log(df) - sf_.lbeta(0.5, 0.5 * df)

    def require_mean(self):
        if not self.df > 1:
            raise NonFiniteScoreError(f"CRPS is infinite for Student t with df={self.df} <= 1")

    def cdf(self, x):
        if x == math.inf:
            return 1.0
        if x == -math.inf:
            return 0.0
        nu = self.df
        x2 = x * x
        half_tail = 0.5 * sf_.inc_beta_pair(0.5 * nu, 0.5, nu / (nu + x2), x2 / (nu + x2))
        return half_tail if x <= 0 else 1.0 - half_tail

    def log_pdf(self, x):
        nu = self.df
        return self._log_norm - 0.5 * (nu + 1.0) * math.log1p(x * x / nu)

    def pdf(self, x):
        if math.isinf(x):
            return 0.0
        return math.exp(self.log_pdf(x))

    def dpdf(self, x):
        if math.isinf(x):
            return 0.0
        return -self.psi(x) * self.pdf(x)

    def psi(self, x):
        nu = self.df
        return (nu + 1.0) * x / (nu + x * x)

    def g(self, x):
        # -G(x) = (nu + x^2) f(x) / (nu - 1); tends to zero in both tails
        if math.isinf(x):
            return 0.0
        nu = self.df
        return (nu + x * x) * self.pdf(x) / (nu - 1.0)

    def bbar(self):
        nu = self.df
        return (2.0 * math.sqrt(nu) / (nu - 1.0)) * math.exp(
            sf_.lbeta(0.5, nu - 0.5) - 2.0 * sf_.lbeta(0.5, 0.5 * nu))

    def _h_pair(self, x):
        """Return ``(H(x), 1 - H(x))`` each to full relative precision."""
        if x == math.inf:
            return 1.0, 0.0
        if x == -math.inf:
            return 0.0, 1.0
        nu = self.df
        x2 = x * x
        # 1/2 I(1/2, nu - 1/2, x^2/(nu+x^2)) = 1/2 - 1/2 I(nu - 1/2, 1/2, nu/(nu+x^2))
        tail = 0.5 * sf_.inc_beta_pair(nu - 0.5, 0.5, nu / (nu + x2), x2 / (nu + x2))
        if x >= 0:
            return 1.0 - tail, tail
        return tail, 1.0 - tail

    def kdiff(self, l, u):
        hl, cl = self._h_pair(l)
        hu, cu = self._h_pair(u)
        d = cl - cu if l >= 0 else hu - hl
        return self.bbar() * d

    def q2(self, x):
        if x == -math.inf:
            return 0.0
        p = self.cdf(x)
        G = -self.g(x)
        return x * p * p - 2.0 * G * p - self.bbar() * self._h_pair(x)[0]


NORMAL = NormalBase()
LOGISTIC = LogisticBase()


def base_for(name, df=None):
    if name == "norm":
        return NORMAL
    if name == "logis":
        return LOGISTIC
    if name == "t":
        return StudentBase(df)
    raise ValueError(f"unknown base distribution {name!r}")
