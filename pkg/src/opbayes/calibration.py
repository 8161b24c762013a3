"""Hyper-parameter estimation for the priors and the expert credibility."""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass
from typing import Sequence

from .gig import GammaParams
from .special import regularized_gamma_p

__all__ = [
    "PriorConstraint",
    "InfeasibleConstraintError",
    "gamma_interval_probability",
    "fit_gamma_from_constraint",
    "gamma_from_mean_vco",
    "xi_from_opinions_moments",
    "fit_gamma_moments",
]

SHAPE_BRACKET = (1e-3, 1e4)
MIN_VCO = 1e-6


class InfeasibleConstraintError(ValueError):
    """No Gamma prior satisfies the requested mean and interval probability."""


@dataclass(frozen=True)
class PriorConstraint:
    """Prior mean plus ``P[low <= X <= high] = prob``."""

    mean: float
    interval_low: float
    interval_high: float
    interval_prob: float

    def __post_init__(self):
        if not (0.0 < self.interval_low < self.mean < self.interval_high):
            raise ValueError(f"need 0 < low < mean < high: {self}")
        if not 0.0 < self.interval_prob < 1.0:
            raise ValueError(f"interval probability must lie in (0, 1): {self}")


def gamma_interval_probability(params: GammaParams, low: float, high: float) -> float:
    a, s = params.shape, params.scale
    return regularized_gamma_p(a, high / s) - regularized_gamma_p(a, low / s)


def fit_gamma_from_constraint(c: PriorConstraint, tol: float = 1e-10) -> GammaParams:
    """Gamma prior with mean ``c.mean`` exactly and the interval probability matched.

    Bisection over the shape in :data:`SHAPE_BRACKET`, with the scale tied to
    ``mean / shape``. Work is done in log-shape.
    """
    def excess(log_shape: float) -> float:
        shape = math.exp(log_shape)
        return gamma_interval_probability(
            GammaParams(shape, c.mean / shape), c.interval_low, c.interval_high
        ) - c.interval_prob

    lo, hi = math.log(SHAPE_BRACKET[0]), math.log(SHAPE_BRACKET[1])
    f_lo, f_hi = excess(lo), excess(hi)
    if f_lo == 0.0:
        hi = lo
    elif f_hi == 0.0:
        lo = hi
    elif (f_lo > 0.0) == (f_hi > 0.0):
        raise InfeasibleConstraintError(
            f"interval probability {c.interval_prob} not reachable for shapes in "
            f"{SHAPE_BRACKET} (range {f_lo + c.interval_prob:.6g}..{f_hi + c.interval_prob:.6g})"
        )
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        f_mid = excess(mid)
        if abs(f_mid) <= tol or hi - lo < 1e-15:
            lo = hi = mid
            break
        if (f_mid > 0.0) == (f_lo > 0.0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    shape = math.exp(0.5 * (lo + hi))
    return GammaParams(shape, c.mean / shape)


def gamma_from_mean_vco(mean: float, vco: float) -> GammaParams:
    """Gamma prior from its mean and coefficient of variation.

    ``shape = 1 / vco^2``, ``scale = mean * vco^2``. Coefficients of variation
    below ``MIN_VCO`` are refused (the shape would exceed 1e12).
    """
    if not (mean > 0.0 and math.isfinite(mean)):
        raise ValueError(f"mean must be finite and > 0, got {mean}")
    if not math.isfinite(vco) or vco < MIN_VCO:
        raise ValueError(f"vco must be >= {MIN_VCO}, got {vco}")
    v2 = vco * vco
    return GammaParams(1.0 / v2, mean * v2)


def _mean_sd(values: Sequence[float], what: str) -> tuple[float, float]:
    if len(values) < 2:
        raise ValueError(f"need at least two {what}")
    mean = statistics.fmean(values)
    sd = statistics.stdev(values)
    if sd == 0.0:
        raise ValueError(f"{what} are all identical (zero spread)")
    return mean, sd


def xi_from_opinions_moments(opinions: Sequence[float]) -> float:
    """Credibility ``xi = (mean / sd)^2`` of Gamma-distributed expert opinions."""
    if any(o <= 0.0 for o in opinions):
        raise ValueError("expert opinions must be > 0")
    mean, sd = _mean_sd(opinions, "expert opinions")
    return (mean / sd) ** 2


def fit_gamma_moments(samples: Sequence[float]) -> GammaParams:
    """Method of moments: ``scale = var / mean``, ``shape = mean / scale``."""
    if any(s <= 0.0 for s in samples):
        raise ValueError("industry samples must be > 0")
    mean, _ = _mean_sd(samples, "industry samples")
    scale = statistics.variance(samples, mean) / mean
    return GammaParams(mean / scale, scale)
