"""Exception hierarchy shared by all scoring modules."""


class ScoringError(Exception):
    """Base class for every error raised by this package."""


class DomainError(ScoringError, ValueError):
    """An argument lies outside the domain of the requested operation."""


class NonFiniteScoreError(DomainError):
    """The score is undefined or infinite for this family parameterization."""


class UnavailableScoreError(ScoringError):
    """The requested score is not implemented for the requested family."""


class ConvergenceError(ScoringError, ArithmeticError):
    """An iterative evaluation failed to reach its tolerance."""


class DegenerateSampleError(DomainError):
    """A sample has no spread, so no bandwidth can be derived from it."""


class DimensionError(DomainError):
    """Array arguments have incompatible shapes."""


class SpecificationError(ScoringError, ValueError):
    """A family name or parameter name is not recognized, or one is missing."""
