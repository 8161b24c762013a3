"""Pareto tail-index model (Pareto-Gamma-Gamma and Pareto-Gamma-GIG).

Losses above a known threshold ``L`` are ``Pareto(Gamma, L)``, i.e.
``P[X > x] = (x / L)^-Gamma``; the tail index has a Gamma (or GIG) prior and
expert opinions ``theta_m | Gamma ~ Gamma(xi, Gamma / xi)``. The posterior is
GIG with::

    nu    = nu0 - M xi + K
    omega = omega0 + sum(log(X_k / L))
    phi   = phi0 + xi * sum(theta_m)

Only internal losses enter the likelihood; external data enter via the prior.
Infinite-mean tail indices (``Gamma <= 1``) are not excluded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

from .experts import NO_EXPERTS, ExpertPanel
from .gig import GammaParams, GigParams, gig_mean

__all__ = [
    "ParetoCellState",
    "log_excesses",
    "pareto_posterior",
    "pareto_posterior_gig_prior",
    "pareto_update_loss",
    "pareto_mle",
    "pareto_bayes_estimate",
]


def _check_threshold(threshold: float) -> float:
    threshold = float(threshold)
    if not (math.isfinite(threshold) and threshold > 0.0):
        raise ValueError(f"threshold must be finite and > 0, got {threshold}")
    return threshold


def log_excesses(losses: Iterable[float], threshold: float) -> tuple[float, ...]:
    """``log(X_k / L)`` per loss; a loss below the threshold is an error."""
    threshold = _check_threshold(threshold)
    out = []
    for i, x in enumerate(losses):
        if not (math.isfinite(x) and x >= threshold):
            raise ValueError(f"loss #{i + 1} = {x} is below the threshold {threshold}")
        out.append(math.log(x / threshold))
    return tuple(out)


def _fold(values: Iterable[float]) -> float:
    # left-to-right from 0.0; sequential updates reproduce this exactly
    acc = 0.0
    for v in values:
        acc += v
    return acc


def _posterior(prior: GigParams, n_losses: int, log_sum: float,
               panel: ExpertPanel) -> GigParams:
    xi = panel.xi or 0.0
    return GigParams(
        prior.nu - panel.size * xi + n_losses,
        prior.omega + log_sum,
        prior.phi + xi * panel.total,
    )


def pareto_posterior_gig_prior(prior: GigParams, threshold: float,
                               losses: Sequence[float],
                               panel: ExpertPanel = NO_EXPERTS) -> GigParams:
    """Posterior GIG of the tail index under a GIG prior."""
    logs = log_excesses(losses, threshold)
    panel.require_positive()
    return _posterior(prior, len(logs), _fold(logs), panel)


def pareto_posterior(prior: GammaParams, threshold: float, losses: Sequence[float],
                     panel: ExpertPanel = NO_EXPERTS) -> GigParams:
    """Posterior GIG of the tail index under a Gamma prior.

    Without experts this is ``Gamma(alpha0 + K, 1 / (1/beta0 + sum log(X/L)))``.
    """
    return pareto_posterior_gig_prior(prior.as_gig(), threshold, losses, panel)


@dataclass(frozen=True)
class ParetoCellState:
    """Prior, threshold, observed losses and expert panel for one cell."""

    prior: GigParams
    threshold: float
    losses: tuple[float, ...] = ()
    panel: ExpertPanel = NO_EXPERTS
    log_sum: float = field(init=False)
    posterior: GigParams = field(init=False)

    def __post_init__(self):
        if isinstance(self.prior, GammaParams):
            object.__setattr__(self, "prior", self.prior.as_gig())
        object.__setattr__(self, "threshold", _check_threshold(self.threshold))
        object.__setattr__(self, "losses", tuple(float(x) for x in self.losses))
        self.panel.require_positive()
        log_sum = _fold(log_excesses(self.losses, self.threshold))
        object.__setattr__(self, "log_sum", log_sum)
        object.__setattr__(
            self, "posterior", _posterior(self.prior, len(self.losses), log_sum, self.panel)
        )

    @classmethod
    def create(cls, prior: GammaParams | GigParams, threshold: float,
               losses: Iterable[float] = (), panel: ExpertPanel = NO_EXPERTS):
        return cls(prior, threshold, tuple(losses), panel)

    @property
    def n_losses(self) -> int:
        return len(self.losses)

    def without_experts(self) -> "ParetoCellState":
        return replace(self, panel=NO_EXPERTS)


def pareto_update_loss(state: ParetoCellState, new_loss: float) -> ParetoCellState:
    """Add one loss: ``nu += 1``, ``omega += log(X/L)``, ``phi`` unchanged."""
    return replace(state, losses=state.losses + (float(new_loss),))


def pareto_mle(losses: Sequence[float], threshold: float) -> float:
    """Maximum likelihood tail index ``K / sum(log(X_k / L))``."""
    logs = log_excesses(losses, threshold)
    if not logs:
        raise ValueError("MLE undefined without losses")
    total = _fold(logs)
    if total == 0.0:
        raise ValueError("MLE undefined: every loss equals the threshold")
    return len(logs) / total


def pareto_bayes_estimate(state: ParetoCellState) -> float:
    """Posterior mean of the tail index."""
    return gig_mean(state.posterior)
