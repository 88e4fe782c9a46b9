"""Analytic CRPS gradients and Hessians with respect to location and scale.

For a location-scale family the CRPS is ``sigma * C(z, a, b)`` with
standardized observation ``z = (y - mu)/sigma`` and standardized bounds
``a = (l - mu)/sigma``, ``b = (u - mu)/sigma``. Writing ``v`` for the vector
of those arguments that are finite and ``C_k``, ``C_kl`` for the partial
derivatives of ``C``::

    d/dmu    = -sum_k C_k
    d/dsigma = C - sum_k v_k C_k
    d2/dmu2          = (1/sigma) sum_kl C_kl
    d2/dmu dsigma    = (1/sigma) sum_kl v_l C_kl
    d2/dsigma2       = (1/sigma) sum_kl v_k v_l C_kl

so only the partials of the standardized score are needed. For truncated
families they involve integrals of quadratic forms in the truncated CDF,
which are evaluated exactly from the antiderivatives of ``F`` and ``F^2``.
Degrees of freedom of Student t families are held fixed.
"""
import math

import numpy as np

from ._bases import LOGISTIC, NORMAL, StudentBase
from .censored import gtc_standard
from .registry import FamilySpec
from ..errors import DomainError, UnavailableScoreError

# family -> (base name, kind)
_KINDS = {
    "norm": ("norm", "plain"),
    "logis": ("logis", "plain"),
    "t": ("t", "plain"),
    "cnorm": ("norm", "cens"),
    "clogis": ("logis", "cens"),
    "ct": ("t", "cens"),
    "tnorm": ("norm", "trunc"),
    "tlogis": ("logis", "trunc"),
    "tt": ("t", "trunc"),
}
SUPPORTED = tuple(_KINDS)
LOGS_SUPPORTED = ("norm", "logis", "t")


def _unpack(spec, params):
    if not isinstance(spec, FamilySpec):
        spec = FamilySpec(spec, params)
    elif params:
        spec = spec.replace(**params)
    if spec.family not in _KINDS:
        raise UnavailableScoreError(
            f"analytic CRPS derivatives are not available for family {spec.family!r}; "
            f"supported: {', '.join(SUPPORTED)}")
    p = spec.params
    base_name, kind = _KINDS[spec.family]
    if base_name == "t":
        base = StudentBase(p["df"])
        base.require_mean()
    else:
        base = NORMAL if base_name == "norm" else LOGISTIC
    if spec.family == "norm":
        loc, scale = p["mean"], p["sd"]
    else:
        loc, scale = p["location"], p["scale"]
    lower = p.get("lower", -math.inf)
    upper = p.get("upper", math.inf)
    if not (math.isfinite(loc) and scale > 0 and math.isfinite(scale)):
        raise DomainError(f"need finite location and scale > 0, got {loc}, {scale}")
    if not lower < upper:
        raise DomainError(f"need lower < upper, got {lower}, {upper}")
    return base, kind, loc, scale, lower, upper


# ---------------------------------------------------------------------------
# integrals of quadratic forms in the truncated CDF
# ---------------------------------------------------------------------------

def _poly_integral(base, c0, c1, c2, lo, hi, side):
    """``int_lo^hi c0 + c1 P + c2 P^2`` with ``P = F`` (``side < 0``) or ``1 - F``.

    On the negative half-line the argument is used directly; on the positive
    half-line symmetry turns ``1 - F(x)`` into ``F(-x)`` so both tails keep
    full precision.
    """
    if not hi > lo:
        return 0.0
    if side < 0:
        x0, x1 = lo, hi
    else:
        x0, x1 = -hi, -lo
    total = 0.0
    if c0 != 0.0:
        total += c0 * (hi - lo)
    if c1 != 0.0:
        total += c1 * (base.q1(x1) - base.q1(x0))
    if c2 != 0.0:
        total += c2 * (base.q2(x1) - base.q2(x0))
    return total


class _TruncForms:
    """Integrals of ``F^2``, ``(1 - F)^2`` and ``F (1 - F)`` for the truncated CDF."""

    def __init__(self, base, a, b):
        self.base = base
        self.D = base.diff(a, b)
        if not self.D > 0:
            raise DomainError(f"interval [{a}, {b}] carries no probability")
        Fa, Fb = base.cdf(a), base.cdf(b)
        Sa, Sb = base.sf(a), base.sf(b)
        # each factor as (constant, slope) in P = F0 (negative side) or S0 (positive side)
        self._neg = {"F": (-Fa, 1.0), "G": (Fb, -1.0)}
        self._pos = {"F": (Sa, -1.0), "G": (-Sb, 1.0)}

    def integral(self, form, lo, hi):
        if not hi > lo:
            return 0.0
        total = 0.0
        for side, table, l_, h_ in ((-1, self._neg, lo, min(hi, 0.0)),
                                    (1, self._pos, max(lo, 0.0), hi)):
            if not h_ > l_:
                continue
            p0, p1 = table[form[0]]
            q0, q1 = table[form[1]]
            total += _poly_integral(self.base, p0 * q0, p0 * q1 + p1 * q0, p1 * q1, l_, h_, side)
        return total / (self.D * self.D)


# ---------------------------------------------------------------------------
# standardized partials
# ---------------------------------------------------------------------------

def _partials(base, kind, z, a, b, need_hess):
    """Return ``(C, first, second)`` with dicts keyed by ``'z'``, ``'a'``, ``'b'``."""
    fin_a, fin_b = math.isfinite(a), math.isfinite(b)
    C = gtc_standard(base, z, a, b, 0.0, 0.0, censored=(kind == "cens"))
    first, second = {}, {}
    inside = a < z < b

    if kind in ("plain", "cens"):
        # an observation on a bound takes the outer branch on both sides, which
        # keeps the partials consistent along directions that move z with the bound
        if z <= a:
            Fz = 0.0
        elif z >= b:
            Fz = 1.0
        else:
            Fz = base.cdf(z)
        first["z"] = 2.0 * Fz - 1.0
        second[("z", "z")] = 2.0 * base.pdf(z) if inside else 0.0
        if fin_a:
            Fa = base.cdf(a)
            ia = 1.0 if z <= a else 0.0
            first["a"] = ia - (Fa - ia) ** 2
            second[("a", "a")] = -2.0 * (Fa - ia) * base.pdf(a)
        if fin_b:
            Fb = base.cdf(b)
            ib = 1.0 if z < b else 0.0
            first["b"] = (Fb - ib) ** 2 - (1.0 - ib) ** 2
            second[("b", "b")] = 2.0 * (Fb - ib) * base.pdf(b)
        return C, first, second

    forms = _TruncForms(base, a, b)
    D = forms.D
    zc = min(max(z, a), b)
    if z <= a:
        Fz = 0.0
    elif z >= b:
        Fz = 1.0
    else:
        Fz = base.diff(a, z) / D
    first["z"] = 2.0 * Fz - 1.0
    second[("z", "z")] = 2.0 * base.pdf(z) / D if inside else 0.0
    if fin_a:
        fa = base.pdf(a)
        E = -forms.integral("FG", a, zc) + forms.integral("GG", zc, b)
        first["a"] = 2.0 * fa * E / D
        if need_hess:
            M2 = forms.integral("GG", a, b)
            ia = 1.0 if z <= a else 0.0
            r = fa / D
            second[("a", "a")] = 2.0 * ((base.dpdf(a) / D + r * r) * E + r * (-ia + r * (M2 + E)))
            second[("z", "a")] = 2.0 * r * (Fz - 1.0) if inside else 0.0
    if fin_b:
        fb = base.pdf(b)
        J1 = forms.integral("FF", a, zc) - forms.integral("FG", zc, b)
        first["b"] = -2.0 * fb * J1 / D
        if need_hess:
            M0 = forms.integral("FF", a, b)
            ib = 1.0 if z >= b else 0.0
            r = fb / D
            second[("b", "b")] = -2.0 * ((base.dpdf(b) / D - r * r) * J1 + r * (ib - r * (M0 + J1)))
            second[("z", "b")] = -2.0 * r * Fz if inside else 0.0
    if fin_a and fin_b and need_hess:
        M11 = forms.integral("FG", a, b)
        second[("a", "b")] = -2.0 * fa * fb / (D * D) * (E - M11 + J1)
    return C, first, second


def _standardized(spec, y, params):
    base, kind, loc, scale, lower, upper = _unpack(spec, params)
    if not math.isfinite(y):
        raise DomainError(f"observation must be finite, got {y}")
    v = {"z": (y - loc) / scale, "a": (lower - loc) / scale, "b": (upper - loc) / scale}
    return base, kind, scale, v


def gradcrps(spec, y, **params):
    """Gradient of the CRPS with respect to ``(location, scale)``.

    Parameters
    ----------
    spec : FamilySpec or str
        One of ``norm``, ``logis``, ``t`` and their censored (``c``) and
        truncated (``t``) variants.
    y : float
        Observation.

    Returns
    -------
    numpy.ndarray of shape (2,)
    """
    base, kind, scale, v = _standardized(spec, float(y), params)
    C, first, _ = _partials(base, kind, v["z"], v["a"], v["b"], False)
    g_mu = -sum(first.values())
    g_sigma = C - sum(v[k] * c for k, c in first.items())
    return np.array([g_mu, g_sigma])


def hesscrps(spec, y, **params):
    """Hessian of the CRPS with respect to ``(location, scale)``; symmetric 2x2."""
    base, kind, scale, v = _standardized(spec, float(y), params)
    _, _, second = _partials(base, kind, v["z"], v["a"], v["b"], True)
    h_mm = h_ms = h_ss = 0.0
    for (k, l), c in second.items():
        mult = 1.0 if k == l else 2.0
        h_mm += mult * c
        h_ms += c * (v[l] + v[k]) if k != l else c * v[k]
        h_ss += mult * v[k] * v[l] * c
    return np.array([[h_mm, h_ms], [h_ms, h_ss]]) / scale


def gradlogs(spec, y, **params):
    """Gradient of the log score with respect to ``(location, scale)``.

    Available for the untruncated ``norm``, ``logis`` and ``t`` families.
    """
    if not isinstance(spec, FamilySpec):
        spec = FamilySpec(spec, params)
    if spec.family not in LOGS_SUPPORTED:
        raise UnavailableScoreError(f"analytic LogS gradient not available for {spec.family!r}")
    p = spec.params
    if spec.family == "norm":
        loc, scale, base = p["mean"], p["sd"], NORMAL
    elif spec.family == "logis":
        loc, scale, base = p["location"], p["scale"], LOGISTIC
    else:
        loc, scale, base = p["location"], p["scale"], StudentBase(p["df"])
    if not (scale > 0 and math.isfinite(scale) and math.isfinite(loc)):
        raise DomainError(f"need finite location and scale > 0, got {loc}, {scale}")
    z = (float(y) - loc) / scale
    psi = base.psi(z)
    return np.array([-psi / scale, (1.0 - z * psi) / scale])
