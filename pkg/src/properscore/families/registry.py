"""Family identifiers, parameter records and score dispatch."""
import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Callable, Mapping, Optional

import numpy as np

from . import censored, continuous, discrete
from .mixture import MixtureNormalSpec, crps_mixnorm, logs_mixnorm
from ..errors import DomainError, SpecificationError, UnavailableScoreError

INF = math.inf
_REQUIRED = object()


@dataclass(frozen=True)
class Family:
    """Static description of one parametric family."""

    name: str
    params: tuple
    defaults: Mapping[str, object]
    crps: Optional[Callable] = None
    logs: Optional[Callable] = None
    aliases: Mapping[str, Callable] = field(default_factory=dict)
    location_scale: Optional[tuple] = None
    description: str = ""

    @property
    def required(self):
        return tuple(p for p in self.params if self.defaults.get(p, _REQUIRED) is _REQUIRED)


def _fam(name, spec, crps=None, logs=None, aliases=None, ls=None, description=""):
    params = tuple(k for k, _ in spec)
    defaults = {k: v for k, v in spec}
    return Family(name, params, defaults, crps, logs, aliases or {}, ls, description)


R = _REQUIRED
_LS = (("location", 0.0), ("scale", 1.0))
_BOUNDS = (("lower", -INF), ("upper", INF))
_MASSES = (("lmass", 0.0), ("umass", 0.0))


def _gamma_scale(params, value):
    params["rate"] = 1.0 / value


def _nbinom_mu(params, value):
    size = params.get("size")
    if size is None:
        raise SpecificationError("nbinom: 'mu' needs 'size' to be given as well")
    if not value >= 0:
        raise DomainError(f"mu must be >= 0, got {value}")
    params["prob"] = size / (size + value)


def _rename(target):
    def apply(params, value):
        params[target] = value
    return apply


_FAMILIES = [
    _fam("lapl", _LS, continuous.crps_lapl, continuous.logs_lapl,
         ls=("location", "scale"), description="Laplace"),
    _fam("logis", _LS, continuous.crps_logis, continuous.logs_logis,
         ls=("location", "scale"), description="logistic"),
    _fam("norm", (("mean", 0.0), ("sd", 1.0)), continuous.crps_norm, continuous.logs_norm,
         aliases={"location": _rename("mean"), "scale": _rename("sd")},
         ls=("mean", "sd"), description="normal"),
    _fam("mixnorm", (("m", R), ("s", R), ("w", None)), description="mixture of normals"),
    _fam("t", (("df", R),) + _LS, continuous.crps_t, continuous.logs_t,
         ls=("location", "scale"), description="Student t"),
    _fam("2pexp", (("location", 0.0), ("scale1", 1.0), ("scale2", 1.0)),
         continuous.crps_2pexp, continuous.logs_2pexp, description="two-piece exponential"),
    _fam("2pnorm", (("location", 0.0), ("scale1", 1.0), ("scale2", 1.0)),
         continuous.crps_2pnorm, continuous.logs_2pnorm, description="two-piece normal"),
    _fam("exp", (("rate", 1.0),), continuous.crps_exp, continuous.logs_exp,
         description="exponential"),
    _fam("gamma", (("shape", R), ("rate", 1.0)), continuous.crps_gamma, continuous.logs_gamma,
         aliases={"scale": _gamma_scale}, description="gamma"),
    _fam("llapl", (("locationlog", 0.0), ("scalelog", 1.0)),
         continuous.crps_llapl, continuous.logs_llapl, description="log-Laplace"),
    _fam("llogis", (("locationlog", 0.0), ("scalelog", 1.0)),
         continuous.crps_llogis, continuous.logs_llogis, description="log-logistic"),
    _fam("lnorm", (("locationlog", 0.0), ("scalelog", 1.0)),
         continuous.crps_lnorm, continuous.logs_lnorm, description="log-normal"),
    _fam("beta", (("shape1", R), ("shape2", R), ("lower", 0.0), ("upper", 1.0)),
         continuous.crps_beta, continuous.logs_beta, description="beta"),
    _fam("unif", (("min", 0.0), ("max", 1.0)) + _MASSES,
         continuous.crps_unif, continuous.logs_unif, description="uniform"),
    _fam("exp2", _LS, None, continuous.logs_exp2, ls=("location", "scale"),
         description="exponential with location and scale"),
    _fam("expM", _LS + (("mass", 0.0),), continuous.crps_expM, None,
         ls=("location", "scale"), description="exponential with point mass"),
    _fam("gev", _LS + (("shape", 0.0),), continuous.crps_gev, continuous.logs_gev,
         ls=("location", "scale"), description="generalized extreme value"),
    _fam("gpd", _LS + (("shape", 0.0), ("mass", 0.0)), continuous.crps_gpd, continuous.logs_gpd,
         ls=("location", "scale"), description="generalized Pareto with point mass"),
    _fam("tlogis", _LS + _BOUNDS, censored.crps_tlogis, censored.logs_tlogis,
         ls=("location", "scale"), description="truncated logistic"),
    _fam("clogis", _LS + _BOUNDS, censored.crps_clogis, None,
         ls=("location", "scale"), description="censored logistic"),
    _fam("gtclogis", _LS + _BOUNDS + _MASSES, censored.crps_gtclogis, None,
         ls=("location", "scale"), description="generalized truncated/censored logistic"),
    _fam("tnorm", _LS + _BOUNDS, censored.crps_tnorm, censored.logs_tnorm,
         ls=("location", "scale"), description="truncated normal"),
    _fam("cnorm", _LS + _BOUNDS, censored.crps_cnorm, None,
         ls=("location", "scale"), description="censored normal"),
    _fam("gtcnorm", _LS + _BOUNDS + _MASSES, censored.crps_gtcnorm, None,
         ls=("location", "scale"), description="generalized truncated/censored normal"),
    _fam("tt", (("df", R),) + _LS + _BOUNDS, censored.crps_tt, censored.logs_tt,
         ls=("location", "scale"), description="truncated Student t"),
    _fam("ct", (("df", R),) + _LS + _BOUNDS, censored.crps_ct, None,
         ls=("location", "scale"), description="censored Student t"),
    _fam("gtct", (("df", R),) + _LS + _BOUNDS + _MASSES, censored.crps_gtct, None,
         ls=("location", "scale"), description="generalized truncated/censored Student t"),
    _fam("binom", (("size", R), ("prob", R)), discrete.crps_binom, discrete.logs_binom,
         description="binomial"),
    _fam("hyper", (("m", R), ("n", R), ("k", R)), discrete.crps_hyper, discrete.logs_hyper,
         description="hypergeometric"),
    _fam("nbinom", (("size", R), ("prob", R)), discrete.crps_nbinom, discrete.logs_nbinom,
         aliases={"mu": _nbinom_mu}, description="negative binomial"),
    _fam("pois", (("lambda", R),), discrete.crps_pois, discrete.logs_pois,
         description="Poisson"),
]

FAMILIES = MappingProxyType({f.name: f for f in _FAMILIES})


def get_family(name):
    try:
        return FAMILIES[name]
    except KeyError:
        raise SpecificationError(f"unknown family {name!r}; known: {', '.join(FAMILIES)}") from None


def _as_float(name, value):
    try:
        return float(value)
    except (TypeError, ValueError):
        raise SpecificationError(f"parameter {name!r} must be a real number, got {value!r}") from None


def _as_vector(name, value):
    arr = np.atleast_1d(np.asarray(value, dtype=float))
    if arr.ndim != 1:
        raise SpecificationError(f"parameter {name!r} must be a vector")
    return tuple(float(v) for v in arr)


def resolve_params(family, params):
    """Map user-facing parameter names (including aliases) to the canonical record."""
    fam = get_family(family) if isinstance(family, str) else family
    given = dict(params)
    out = {}
    vector = fam.name == "mixnorm"
    for k in fam.params:
        if k in given:
            v = given.pop(k)
            out[k] = (None if v is None else _as_vector(k, v)) if vector else _as_float(k, v)
    for k in list(given):
        if k in fam.aliases:
            v = _as_float(k, given.pop(k))
            fam.aliases[k](out, v)
    if given:
        raise SpecificationError(
            f"{fam.name}: unknown parameter(s) {', '.join(sorted(given))}; "
            f"expected {', '.join(fam.params + tuple(fam.aliases))}")
    for k in fam.params:
        if k not in out:
            d = fam.defaults[k]
            if d is _REQUIRED:
                raise SpecificationError(f"{fam.name}: missing required parameter {k!r}")
            out[k] = d
    return out


@dataclass(frozen=True)
class FamilySpec:
    """A parametric family together with its parameter record.

    Parameters are given by name; aliases such as ``location``/``scale`` for
    the normal family, ``scale`` for the gamma family or ``mu`` for the
    negative binomial family are translated to the canonical names.

    Examples
    --------
    >>> FamilySpec.of("norm", mean=0.0, sd=1.0).params["sd"]
    1.0
    """

    family: str
    params: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self):
        fam = get_family(self.family)
        object.__setattr__(self, "params", MappingProxyType(resolve_params(fam, self.params)))

    @classmethod
    def of(cls, family, **params):
        return cls(family, params)

    @property
    def info(self):
        return FAMILIES[self.family]

    def args(self):
        return tuple(self.params[k] for k in self.info.params)

    def mixture(self):
        p = self.params
        return MixtureNormalSpec(p["m"], p["s"], p["w"])

    def replace(self, **params):
        merged = dict(self.params)
        merged.update(params)
        return FamilySpec(self.family, merged)


def _coerce(spec, params):
    if isinstance(spec, FamilySpec):
        if params:
            return spec.replace(**params)
        return spec
    return FamilySpec(spec, params)


def crps_closed(spec, y, **params):
    """Closed-form CRPS of a parametric forecast at observation ``y``.

    Parameters
    ----------
    spec : FamilySpec or str
        The forecast distribution, or a family name with ``params`` given as
        keyword arguments.
    y : float
        Finite observation.

    Raises
    ------
    UnavailableScoreError
        The family has no closed-form CRPS (``exp2``).
    NonFiniteScoreError
        The CRPS is infinite for these parameters (e.g. Student t with
        ``df <= 1``, GEV with ``shape >= 1``).
    DomainError
        Any other parameter or observation outside its domain.
    """
    spec = _coerce(spec, params)
    y = float(y)
    if spec.family == "mixnorm":
        return crps_mixnorm(spec.mixture(), y)
    fn = spec.info.crps
    if fn is None:
        raise UnavailableScoreError(f"CRPS unavailable for family {spec.family!r}")
    return fn(y, *spec.args())


def logs_closed(spec, y, **params):
    """Logarithmic score ``-log f(y)`` of a parametric forecast.

    Returns ``inf`` for observations outside the support. Families with point
    masses or censoring have no density and raise
    :class:`~properscore.errors.UnavailableScoreError`.
    """
    spec = _coerce(spec, params)
    y = float(y)
    if spec.family == "mixnorm":
        return logs_mixnorm(spec.mixture(), y)
    fn = spec.info.logs
    if fn is None:
        raise UnavailableScoreError(f"LogS unavailable for family {spec.family!r}")
    return fn(y, *spec.args())


def score_available(family, score):
    fam = get_family(family)
    if fam.name == "mixnorm":
        return score in ("crps", "logs")
    return {"crps": fam.crps, "logs": fam.logs}.get(score) is not None
