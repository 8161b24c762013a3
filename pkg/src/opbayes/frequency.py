"""Poisson-Gamma-Gamma frequency model.

Annual counts ``N_k | Lambda ~ Pois(V Lambda)``, prior ``Lambda ~ Gamma(alpha0, beta0)``
(or a GIG prior) and expert opinions ``theta_m | Lambda ~ Gamma(xi, Lambda / xi)``.
The posterior of ``Lambda`` is GIG with::

    nu    = nu0 - M xi + sum(N_k)
    omega = omega0 + V K
    phi   = phi0 + xi * sum(theta_m)

where a Gamma prior enters as ``(nu0, omega0, phi0) = (alpha0 - 1, 1/beta0, 0)``.

Posteriors are always rebuilt from the sufficient statistics (integer count
total, number of years), so a year-by-year fold and a batch computation give
bit-identical parameters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

from .experts import NO_EXPERTS, ExpertPanel
from .gig import GammaParams, GigParams, gig_mean, gig_mode, gig_mode_approx

__all__ = [
    "FrequencyCellState",
    "freq_posterior",
    "freq_posterior_gig_prior",
    "freq_update_year",
    "freq_bayes_estimate",
    "freq_mode_estimate",
    "freq_mode_approx_estimate",
    "freq_mle",
    "freq_two_source_estimate",
]


def _check_counts(counts: Iterable[int]) -> tuple[int, ...]:
    out = []
    for n in counts:
        if int(n) != n or n < 0:
            raise ValueError(f"annual counts must be non-negative integers, got {n}")
        out.append(int(n))
    return tuple(out)


def _check_volume(volume: float) -> float:
    volume = float(volume)
    if not (math.isfinite(volume) and volume > 0.0):
        raise ValueError(f"volume must be finite and > 0, got {volume}")
    return volume


def _as_gig(prior: GammaParams | GigParams) -> GigParams:
    return prior.as_gig() if isinstance(prior, GammaParams) else prior


def _posterior(prior: GigParams, volume: float, n_years: int, total: int,
               panel: ExpertPanel) -> GigParams:
    return GigParams(
        prior.nu - panel.size * (panel.xi or 0.0) + total,
        prior.omega + volume * n_years,
        prior.phi + (panel.xi or 0.0) * panel.total,
    )


def freq_posterior_gig_prior(prior: GigParams, volume: float, counts: Sequence[int],
                             panel: ExpertPanel = NO_EXPERTS) -> GigParams:
    """Posterior GIG of the intensity under a GIG prior."""
    counts = _check_counts(counts)
    panel.require_positive()
    return _posterior(prior, _check_volume(volume), len(counts), sum(counts), panel)


def freq_posterior(prior: GammaParams, volume: float, counts: Sequence[int],
                   panel: ExpertPanel = NO_EXPERTS) -> GigParams:
    """Posterior GIG of the intensity under a Gamma prior.

    With an empty panel the result is the Gamma branch
    ``GIG(alpha0 - 1 + sum N, V K + 1/beta0, 0)``, i.e. the classical
    Poisson-Gamma conjugate posterior.
    """
    return freq_posterior_gig_prior(prior.as_gig(), volume, counts, panel)


@dataclass(frozen=True)
class FrequencyCellState:
    """Prior, exposure, observed years and expert panel of one risk cell.

    Build with :meth:`create`; ``posterior`` is derived and kept in sync by
    every constructor path.
    """

    prior: GigParams
    volume: float
    counts: tuple[int, ...] = ()
    panel: ExpertPanel = NO_EXPERTS
    total: int = field(init=False)
    posterior: GigParams = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "prior", _as_gig(self.prior))
        object.__setattr__(self, "volume", _check_volume(self.volume))
        object.__setattr__(self, "counts", _check_counts(self.counts))
        self.panel.require_positive()
        total = sum(self.counts)
        object.__setattr__(self, "total", total)
        object.__setattr__(
            self, "posterior",
            _posterior(self.prior, self.volume, len(self.counts), total, self.panel),
        )

    @classmethod
    def create(cls, prior: GammaParams | GigParams, volume: float = 1.0,
               counts: Iterable[int] = (), panel: ExpertPanel = NO_EXPERTS):
        return cls(_as_gig(prior), volume, tuple(counts), panel)

    @property
    def n_years(self) -> int:
        return len(self.counts)

    def without_experts(self) -> "FrequencyCellState":
        return replace(self, panel=NO_EXPERTS)


def freq_update_year(state: FrequencyCellState, new_count: int) -> FrequencyCellState:
    """Add one year of data: ``nu += N``, ``omega += V``, ``phi`` unchanged."""
    return replace(state, counts=state.counts + (new_count,))


def freq_bayes_estimate(state: FrequencyCellState) -> float:
    """Posterior mean of the intensity."""
    return gig_mean(state.posterior)


def freq_mode_estimate(state: FrequencyCellState) -> float:
    return gig_mode(state.posterior)


def freq_mode_approx_estimate(state: FrequencyCellState) -> float:
    return gig_mode_approx(state.posterior)


def freq_mle(counts: Sequence[int], volume: float = 1.0) -> float:
    """Maximum likelihood intensity ``mean(N) / V``."""
    counts = _check_counts(counts)
    if not counts:
        raise ValueError("MLE undefined without observed years")
    return sum(counts) / len(counts) / _check_volume(volume)


def freq_two_source_estimate(prior: GammaParams, volume: float,
                             counts: Sequence[int]) -> float:
    """Prior/data credibility blend, the posterior mean without experts.

    ``w * alpha0 beta0 + (1 - w) * mean(N) / V`` with ``w = 1 / (V K beta0 + 1)``.
    """
    counts = _check_counts(counts)
    volume = _check_volume(volume)
    if not counts:
        return prior.mean
    weight = 1.0 / (volume * len(counts) * prior.scale + 1.0)
    return weight * prior.mean + (1.0 - weight) * (sum(counts) / len(counts) / volume)
