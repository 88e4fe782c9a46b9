"""Parametric forecast families: closed-form CRPS, log score and derivatives."""
from .gradients import SUPPORTED as GRADIENT_FAMILIES
from .gradients import gradcrps, gradlogs, hesscrps
from .mixture import MixtureNormalSpec, crps_mixnorm, logs_mixnorm
from .registry import (FAMILIES, FamilySpec, crps_closed, get_family, logs_closed,
                       resolve_params, score_available)

__all__ = [
    "FAMILIES",
    "FamilySpec",
    "GRADIENT_FAMILIES",
    "MixtureNormalSpec",
    "crps_closed",
    "crps_mixnorm",
    "get_family",
    "gradcrps",
    "gradlogs",
    "hesscrps",
    "logs_closed",
    "logs_mixnorm",
    "resolve_params",
    "score_available",
]
