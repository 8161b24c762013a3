"""Estimator paths as data arrive one year (or one loss) at a time.

Row ``k`` holds the estimates after the first ``k`` observations: the Bayes
estimate with experts, the Bayes estimate without experts (prior + internal
data only) and the maximum likelihood estimate (``None`` when undefined).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .experts import NO_EXPERTS, ExpertPanel
from .frequency import FrequencyCellState, freq_bayes_estimate, freq_mle, freq_two_source_estimate
from .gig import GammaParams, GigParams, gig_mean
from .lognormal import LognormalCellState, NormalParams, log_severities
from .pareto import ParetoCellState, pareto_bayes_estimate, pareto_mle

__all__ = [
    "TrajectoryRow",
    "frequency_trajectory",
    "pareto_trajectory",
    "lognormal_trajectory",
]


@dataclass(frozen=True)
class TrajectoryRow:
    k: int
    bayes: float
    two_source: float
    mle: float | None


def frequency_trajectory(prior: GammaParams | GigParams, volume: float,
                         counts: Sequence[int],
                         panel: ExpertPanel = NO_EXPERTS) -> list[TrajectoryRow]:
    rows = []
    for k in range(len(counts) + 1):
        seen = counts[:k]
        state = FrequencyCellState.create(prior, volume, seen, panel)
        if isinstance(prior, GammaParams):
            two = freq_two_source_estimate(prior, volume, seen)
        else:
            two = freq_bayes_estimate(state.without_experts())
        mle = freq_mle(seen, volume) if k else None
        rows.append(TrajectoryRow(k, freq_bayes_estimate(state), two, mle))
    return rows


def pareto_trajectory(prior: GammaParams | GigParams, threshold: float,
                      losses: Sequence[float],
                      panel: ExpertPanel = NO_EXPERTS) -> list[TrajectoryRow]:
    rows = []
    for k in range(len(losses) + 1):
        seen = losses[:k]
        state = ParetoCellState.create(prior, threshold, seen, panel)
        try:
            mle = pareto_mle(seen, threshold)
        except ValueError:
            mle = None
        rows.append(TrajectoryRow(
            k, pareto_bayes_estimate(state),
            pareto_bayes_estimate(state.without_experts()), mle,
        ))
    return rows


def lognormal_trajectory(prior: NormalParams, obs_sigma: float,
                         severities: Sequence[float],
                         panel: ExpertPanel = NO_EXPERTS) -> list[TrajectoryRow]:
    """Estimates of the log-location; the MLE is the mean log-loss."""
    logs = log_severities(severities)
    rows = []
    for k in range(len(logs) + 1):
        state = LognormalCellState(prior, obs_sigma, logs[:k], panel)
        mle = math.fsum(logs[:k]) / k if k else None
        rows.append(TrajectoryRow(
            k, state.posterior.mean, state.without_experts().posterior.mean, mle,
        ))
    return rows
