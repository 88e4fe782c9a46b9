"""Optimum score estimation for unconditional parametric families.

Parameters are fitted by minimizing the mean CRPS or mean LogS (maximum
likelihood) over a training sample. The minimizer is a self-contained BFGS
iteration in an unconstrained parameterization: positive parameters are
optimized on the log scale and probabilities on the logit scale.
"""
import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping, Optional

import numpy as np
from scipy.special import expit, logit, ndtr

from .errors import DomainError, ScoringError, SpecificationError, UnavailableScoreError
from .families import FamilySpec, get_family, gradcrps, gradlogs
from .families.gradients import LOGS_SUPPORTED, SUPPORTED as CRPS_GRAD_SUPPORTED
from .specfun import INV_SQRT_2PI, LOG_SQRT_2PI, SQRT_PI

SCORES = ("crps", "logs")

GTOL = 1e-6
FTOL = 1e-10
MAXITER = 500

# parameters constrained to (0, inf) or (0, 1); everything else is real
_POSITIVE = {"sd", "scale", "scale1", "scale2", "rate", "shape1", "shape2",
             "lambda", "scalelog", "size"}
_UNIT = {"prob", "mass"}

_DEFAULT_FREE = {
    "norm": ("mean", "sd"),
    "2pexp": ("location", "scale1", "scale2"),
    "2pnorm": ("location", "scale1", "scale2"),
    "exp": ("rate",),
    "gamma": ("shape", "rate"),
    "llapl": ("locationlog", "scalelog"),
    "llogis": ("locationlog", "scalelog"),
    "lnorm": ("locationlog", "scalelog"),
    "beta": ("shape1", "shape2"),
    "unif": ("min", "max"),
    "gev": ("location", "scale", "shape"),
    "gpd": ("scale", "shape"),
    "binom": ("prob",),
    "nbinom": ("size", "prob"),
    "pois": ("lambda",),
}


def _kind(family, name):
    if name in _UNIT:
        return "unit"
    if name in _POSITIVE or (family == "gamma" and name == "shape"):
        return "pos"
    return "real"


def default_free(family):
    """Names of the parameters fitted by default for ``family``."""
    fam = get_family(family)
    if fam.name in _DEFAULT_FREE:
        return _DEFAULT_FREE[fam.name]
    if fam.location_scale is not None:
        return fam.location_scale
    raise UnavailableScoreError(f"no default parameters to estimate for family {fam.name!r}")


def moment_init(family, data, fixed=None):
    """Rough starting values by moment matching."""
    y = np.asarray(data, dtype=float)
    fixed = dict(fixed or {})
    mean = float(np.mean(y))
    sd = float(np.std(y)) if y.size > 1 else 1.0
    sd = sd if sd > 0 else 1.0
    var = sd * sd
    fam = get_family(family).name
    if fam in ("exp",):
        return {"rate": 1.0 / mean}
    if fam == "gamma":
        return {"shape": mean * mean / var, "rate": mean / var}
    if fam in ("llapl", "llogis", "lnorm"):
        ly = np.log(y)
        s = float(np.std(ly)) or 1.0
        if fam != "lnorm":
            s = min(s, 0.5)
        return {"locationlog": float(np.mean(ly)), "scalelog": s}
    if fam == "beta":
        lo, hi = fixed.get("lower", 0.0), fixed.get("upper", 1.0)
        u = (mean - lo) / (hi - lo)
        v = var / (hi - lo) ** 2
        k = max(u * (1.0 - u) / v - 1.0, 0.5)
        return {"shape1": u * k, "shape2": (1.0 - u) * k}
    if fam == "unif":
        pad = 0.01 * (float(np.max(y)) - float(np.min(y)) or 1.0)
        return {"min": float(np.min(y)) - pad, "max": float(np.max(y)) + pad}
    if fam == "pois":
        return {"lambda": mean}
    if fam == "binom":
        return {"prob": min(max(mean / fixed["size"], 1e-3), 1.0 - 1e-3)}
    if fam == "nbinom":
        prob = min(max(mean / var, 0.05), 0.95)
        return {"size": max(mean * prob / (1.0 - prob), 0.1), "prob": prob}
    if fam in ("2pexp", "2pnorm"):
        return {"location": float(np.median(y)), "scale1": sd, "scale2": sd}
    if fam == "gev":
        return {"location": mean - 0.45 * sd, "scale": 0.78 * sd, "shape": 0.1}
    if fam == "gpd":
        loc = fixed.get("location", 0.0)
        return {"scale": max(mean - loc, 1e-3), "shape": 0.1}
    if fam == "norm":
        return {"mean": mean, "sd": sd}
    return {"location": mean, "scale": sd}


@dataclass(frozen=True, eq=False)
class EstimationProblem:
    """A minimum-score fitting problem.

    Parameters
    ----------
    family : str
        Family name.
    data : array_like
        Training observations.
    score : {"crps", "logs"}
    init : mapping, optional
        Starting values for the free parameters; moment matching by default.
    fixed : mapping, optional
        Values for parameters that are not fitted (e.g. ``df`` of Student t
        families or truncation bounds).
    free : sequence of str, optional
        Names of the fitted parameters; see :func:`default_free`.
    """

    family: str
    data: np.ndarray
    score: str = "crps"
    init: Optional[Mapping[str, float]] = None
    fixed: Mapping[str, float] = field(default_factory=dict)
    free: Optional[tuple] = None

    def __post_init__(self):
        fam = get_family(self.family)
        if fam.name in ("mixnorm", "hyper"):
            raise UnavailableScoreError(f"estimation is not supported for family {fam.name!r}")
        if self.score not in SCORES:
            raise SpecificationError(f"score must be one of {SCORES}, got {self.score!r}")
        if (self.score == "crps" and fam.crps is None) or (self.score == "logs" and fam.logs is None):
            raise UnavailableScoreError(f"{self.score} unavailable for family {fam.name!r}")
        y = np.asarray(self.data, dtype=float).reshape(-1)
        if y.size < 1:
            raise DomainError("training data must not be empty")
        if not np.all(np.isfinite(y)):
            raise DomainError("training data must be finite")
        y = y.copy()
        y.setflags(write=False)
        object.__setattr__(self, "data", y)
        free = tuple(self.free) if self.free is not None else tuple(default_free(fam.name))
        unknown = [k for k in free if k not in fam.params]
        if unknown:
            raise SpecificationError(f"{fam.name}: unknown free parameter(s) {unknown}")
        fixed = dict(self.fixed)
        overlap = set(free) & set(fixed)
        if overlap:
            raise SpecificationError(f"parameters both free and fixed: {sorted(overlap)}")
        object.__setattr__(self, "free", free)
        object.__setattr__(self, "fixed", MappingProxyType(fixed))
        init = dict(self.init) if self.init is not None else moment_init(fam.name, y, fixed)
        missing = [k for k in free if k not in init]
        if missing:
            raise SpecificationError(f"missing initial value(s) for {missing}")
        init = {k: float(init[k]) for k in free}
        for k, v in init.items():
            kind = _kind(fam.name, k)
            ok = (math.isfinite(v) and (kind == "real" or (kind == "pos" and v > 0)
                                        or (kind == "unit" and 0 < v < 1)))
            if not ok:
                raise DomainError(f"initial value {k}={v} is outside its admissible range")
        object.__setattr__(self, "init", MappingProxyType(init))
        # validate the full parameter record once
        self.spec(self.init_vector())

    @property
    def kinds(self):
        return tuple(_kind(self.family, k) for k in self.free)

    def init_vector(self):
        return np.array([self.init[k] for k in self.free])

    def as_dict(self, params):
        if isinstance(params, Mapping):
            return {k: float(params[k]) for k in self.free}
        v = np.asarray(params, dtype=float).reshape(-1)
        if v.size != len(self.free):
            raise SpecificationError(f"expected {len(self.free)} parameters {self.free}, got {v.size}")
        return dict(zip(self.free, (float(x) for x in v)))

    def spec(self, params):
        p = dict(self.fixed)
        p.update(self.as_dict(params))
        return FamilySpec(self.family, p)


@dataclass(frozen=True)
class EstimationResult:
    """Outcome of :func:`minimize_score`.

    ``converged`` is true exactly when the final gradient norm (in the natural
    parameterization) is at most the tolerance.
    """

    names: tuple
    x: np.ndarray
    objective: float
    grad_norm: float
    iterations: int
    converged: bool
    message: str = ""

    @property
    def params(self):
        return dict(zip(self.names, (float(v) for v in self.x)))

    def to_dict(self):
        return {"params": self.params, "objective": float(self.objective),
                "grad_norm": float(self.grad_norm), "iterations": int(self.iterations),
                "converged": bool(self.converged), "message": self.message}


# ---------------------------------------------------------------------------
# objective and gradient
# ---------------------------------------------------------------------------

def _is_plain_norm(problem):
    return problem.family == "norm" and set(problem.free) <= {"mean", "sd"}


def _norm_terms(problem, spec):
    mu, sigma = spec.params["mean"], spec.params["sd"]
    if not (math.isfinite(mu) and sigma > 0 and math.isfinite(sigma)):
        raise DomainError(f"need finite mean and sd > 0, got {mu}, {sigma}")
    z = (problem.data - mu) / sigma
    return mu, sigma, z


def mean_score(problem, params):
    """Mean score ``(1/n) sum_i S(F_params, y_i)`` over the training data."""
    spec = problem.spec(params)
    if _is_plain_norm(problem):
        _, sigma, z = _norm_terms(problem, spec)
        if problem.score == "crps":
            pdf = INV_SQRT_2PI * np.exp(-0.5 * z * z)
            vals = sigma * (z * (2.0 * ndtr(z) - 1.0) + 2.0 * pdf - 1.0 / SQRT_PI)
        else:
            vals = math.log(sigma) + LOG_SQRT_2PI + 0.5 * z * z
        return float(np.mean(vals))
    fam = spec.info
    fn = fam.crps if problem.score == "crps" else fam.logs
    args = spec.args()
    vals = np.fromiter((fn(float(y), *args) for y in problem.data), float, problem.data.size)
    return float(np.mean(vals))


def _analytic(problem):
    fam = problem.family
    ls = get_family(fam).location_scale
    if ls is None or not set(problem.free) <= set(ls):
        return None
    if problem.score == "crps" and fam in CRPS_GRAD_SUPPORTED:
        return gradcrps, ls
    if problem.score == "logs" and fam in LOGS_SUPPORTED:
        return gradlogs, ls
    return None


def _fd_gradient(problem, x):
    g = np.empty_like(x)
    for i in range(x.size):
        h = max(1e-7, 1e-7 * abs(x[i]))
        up, dn = x.copy(), x.copy()
        up[i] += h
        dn[i] -= h
        try:
            f_up = mean_score(problem, up)
        except ScoringError:
            f_up = None
        try:
            f_dn = mean_score(problem, dn)
        except ScoringError:
            f_dn = None
        if f_up is not None and f_dn is not None:
            g[i] = (f_up - f_dn) / (2.0 * h)
        else:
            f0 = mean_score(problem, x)
            if f_up is not None:
                g[i] = (f_up - f0) / h
            elif f_dn is not None:
                g[i] = (f0 - f_dn) / h
            else:
                raise DomainError(f"cannot difference parameter {problem.free[i]!r} at {x[i]}")
    return g


def mean_score_gradient(problem, params):
    """Gradient of :func:`mean_score` with respect to the free parameters.

    Analytic for the location/scale parameters of ``norm``, ``logis``, ``t``
    and their censored and truncated variants under CRPS, and of ``norm``,
    ``logis`` and ``t`` under LogS; central finite differences otherwise.
    """
    x = np.array([problem.as_dict(params)[k] for k in problem.free])
    spec = problem.spec(x)
    if _is_plain_norm(problem):
        _, sigma, z = _norm_terms(problem, spec)
        if problem.score == "crps":
            g_mu = -np.mean(2.0 * ndtr(z) - 1.0)
            g_sigma = np.mean(2.0 * INV_SQRT_2PI * np.exp(-0.5 * z * z)) - 1.0 / SQRT_PI
        else:
            g_mu = -np.mean(z) / sigma
            g_sigma = np.mean(1.0 - z * z) / sigma
        full = {"mean": float(g_mu), "sd": float(g_sigma)}
        return np.array([full[k] for k in problem.free])
    analytic = _analytic(problem)
    if analytic is None:
        return _fd_gradient(problem, x)
    fn, ls = analytic
    total = np.zeros(2)
    for y in problem.data:
        total += fn(spec, float(y))
    total /= problem.data.size
    full = dict(zip(ls, total))
    return np.array([full[k] for k in problem.free])


# ---------------------------------------------------------------------------
# BFGS in the unconstrained parameterization
# ---------------------------------------------------------------------------

def _to_theta(kinds, x):
    out = np.empty_like(x)
    for i, k in enumerate(kinds):
        out[i] = math.log(x[i]) if k == "pos" else (logit(x[i]) if k == "unit" else x[i])
    return out


def _from_theta(kinds, theta):
    """Return the natural parameters and ``d x / d theta``."""
    x = np.empty_like(theta)
    jac = np.empty_like(theta)
    for i, k in enumerate(kinds):
        if k == "pos":
            x[i] = math.exp(theta[i])
            jac[i] = x[i]
        elif k == "unit":
            x[i] = expit(theta[i])
            jac[i] = x[i] * (1.0 - x[i])
        else:
            x[i] = theta[i]
            jac[i] = 1.0
    return x, jac


def minimize_score(problem, gtol=GTOL, ftol=FTOL, maxiter=MAXITER):
    """Fit the free parameters of ``problem`` by BFGS.

    Iterates until the gradient norm drops below ``gtol`` (and a little
    beyond, while progress is made), the relative objective change stays
    below ``ftol`` for three consecutive steps, the line search fails or
    ``maxiter`` is reached. Non-convergence is reported through
    ``converged=False`` rather than an exception. Domain errors at trial
    points shorten the step.

    Returns
    -------
    EstimationResult
    """
    if problem.data.size < 2:
        raise DomainError("estimation needs at least two training observations")
    kinds = problem.kinds
    c1, c2 = 1e-4, 0.9
    max_step = 5.0
    # keep iterating past gtol while cheap, so fitted values are accurate
    target = 1e-3 * gtol

    def evaluate(theta, with_grad=True):
        x, jac = _from_theta(kinds, theta)
        if not np.all(np.isfinite(x)):
            raise DomainError("parameter overflow")
        f = mean_score(problem, x)
        if not math.isfinite(f):
            raise DomainError("non-finite objective")
        if not with_grad:
            return x, f, None, None
        g_nat = mean_score_gradient(problem, x)
        return x, f, g_nat * jac, g_nat

    theta = _to_theta(kinds, problem.init_vector())
    x, f, g, g_nat = evaluate(theta)
    n = theta.size
    H = np.eye(n)
    fresh = True
    small = 0
    it = 0
    message = "maximum number of iterations reached"
    while it < maxiter:
        if np.linalg.norm(g_nat) <= target:
            message = "gradient tolerance reached"
            break
        p = -H @ g
        slope = float(g @ p)
        if not slope < 0:
            H, fresh = np.eye(n), True
            p = -g
            slope = float(g @ p)
        alpha = min(1.0, max_step / max(np.max(np.abs(p)), 1e-300))
        accepted = None
        for _ in range(80):
            trial = theta + alpha * p
            try:
                tx, tf, _, _ = evaluate(trial, with_grad=False)
            except ScoringError:
                tf = math.inf
            if tf <= f + c1 * alpha * slope:
                accepted = trial
                break
            alpha *= 0.5
        if accepted is None:
            if not fresh:
                H, fresh = np.eye(n), True
                continue
            message = "line search failed"
            break
        it += 1
        try:
            nx, nf, ng, ng_nat = evaluate(accepted)
        except ScoringError:
            message = "gradient evaluation failed"
            break
        s = accepted - theta
        yv = ng - g
        sy = float(s @ yv)
        # curvature (weak Wolfe) condition guards the update
        if float(ng @ p) >= c2 * slope and sy > 1e-12 * np.linalg.norm(s) * np.linalg.norm(yv):
            if fresh:
                H = np.eye(n) * (sy / float(yv @ yv))
                fresh = False
            rho = 1.0 / sy
            V = np.eye(n) - rho * np.outer(s, yv)
            H = V @ H @ V.T + rho * np.outer(s, s)
        rel = abs(f - nf) / max(abs(f), abs(nf), 1e-300)
        theta, x, f, g, g_nat = accepted, nx, nf, ng, ng_nat
        small = small + 1 if rel <= ftol else 0
        if small >= 3:
            message = "relative objective change below tolerance"
            break
    grad_norm = float(np.linalg.norm(g_nat))
    converged = grad_norm <= gtol
    if converged and message != "gradient tolerance reached":
        message = "gradient tolerance reached"
    return EstimationResult(problem.free, x.copy(), f, grad_norm, it, converged, message)


def ml_norm(data):
    """Closed-form maximum likelihood estimates ``(mean, sd)`` for the normal family."""
    y = np.asarray(data, dtype=float)
    mu = float(np.mean(y))
    return mu, float(np.sqrt(np.mean((y - mu) ** 2)))
