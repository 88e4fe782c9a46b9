"""Proper scoring rules for probabilistic forecasts.

Closed-form CRPS and log scores for parametric families, scores for
simulated samples, multivariate energy and variogram scores and minimum
score parameter estimation.
"""
__version__ = "0.1.0"

from .errors import (ConvergenceError, DegenerateSampleError, DimensionError, DomainError,
                     NonFiniteScoreError, ScoringError, SpecificationError,
                     UnavailableScoreError)
from .families import (FAMILIES, FamilySpec, MixtureNormalSpec, crps_closed, crps_mixnorm,
                       gradcrps, gradlogs, hesscrps, logs_closed, logs_mixnorm)
from .sample_scores import (SampleForecast, bandwidth_nrd, crps_sample, crps_sample_edf,
                            crps_sample_kde, logs_sample)
from .multivariate import MultivariateForecast, es_sample, vs_sample
from .estimation import (EstimationProblem, EstimationResult, mean_score, mean_score_gradient,
                         minimize_score, ml_norm)

__all__ = [
    "ConvergenceError", "DegenerateSampleError", "DimensionError", "DomainError",
    "NonFiniteScoreError", "ScoringError", "SpecificationError", "UnavailableScoreError",
    "FAMILIES", "FamilySpec", "MixtureNormalSpec", "crps_closed", "crps_mixnorm",
    "gradcrps", "gradlogs", "hesscrps", "logs_closed", "logs_mixnorm",
    "SampleForecast", "bandwidth_nrd", "crps_sample", "crps_sample_edf", "crps_sample_kde",
    "logs_sample", "MultivariateForecast", "es_sample", "vs_sample",
    "EstimationProblem", "EstimationResult", "mean_score", "mean_score_gradient",
    "minimize_score", "ml_norm",
]
