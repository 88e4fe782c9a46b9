"""Parameter validation shared by the family implementations."""
import math

from ..errors import DomainError


def finite(name, v):
    if not math.isfinite(v):
        raise DomainError(f"{name} must be finite, got {v}")


def positive(name, v):
    if not (v > 0 and math.isfinite(v)):
        raise DomainError(f"{name} must be finite and > 0, got {v}")


def nonnegative(name, v):
    if not (v >= 0 and math.isfinite(v)):
        raise DomainError(f"{name} must be finite and >= 0, got {v}")


def in_unit(name, v, lo_open=False, hi_open=False):
    ok_lo = v > 0 if lo_open else v >= 0
    ok_hi = v < 1 if hi_open else v <= 1
    if not (ok_lo and ok_hi):
        lb = "(" if lo_open else "["
        rb = ")" if hi_open else "]"
        raise DomainError(f"{name} must lie in {lb}0, 1{rb}, got {v}")


def count(name, v):
    if not (v >= 0 and math.isfinite(v) and v == math.floor(v)):
        raise DomainError(f"{name} must be a nonnegative integer, got {v}")
    return int(v)


def observation(y):
    if not math.isfinite(y):
        raise DomainError(f"observation must be finite, got {y}")


def bounds(lower, upper):
    if math.isnan(lower) or math.isnan(upper):
        raise DomainError("bounds must not be NaN")
    if not lower < upper:
        raise DomainError(f"need lower < upper, got lower={lower}, upper={upper}")


def masses(lmass, umass, lower=None, upper=None):
    nonnegative("lmass", lmass)
    nonnegative("umass", umass)
    if not lmass + umass < 1:
        raise DomainError(f"need lmass + umass < 1, got {lmass} + {umass}")
    if lower is not None and lmass > 0 and math.isinf(lower):
        raise DomainError("a point mass needs a finite lower bound")
    if upper is not None and umass > 0 and math.isinf(upper):
        raise DomainError("a point mass needs a finite upper bound")
