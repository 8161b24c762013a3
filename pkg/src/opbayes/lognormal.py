"""Lognormal-normal-normal severity model.

``log X_k | Delta ~ N(Delta, sigma)`` with ``sigma`` known, prior
``Delta ~ N(mu0, sigma0)`` and expert opinions ``theta_m | Delta ~ N(Delta, xi)``.
The posterior of ``Delta`` is normal; its mean is a three-way credibility
blend of the prior mean, the mean log-loss and the mean opinion.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

from .experts import NO_EXPERTS, ExpertPanel

__all__ = [
    "NormalParams",
    "LognormalCellState",
    "log_severities",
    "lognormal_posterior",
    "credibility_weights",
    "xi_from_opinions_stdev",
    "lognormal_update_loss",
]


@dataclass(frozen=True)
class NormalParams:
    mean: float
    stdev: float

    def __post_init__(self):
        if not math.isfinite(self.mean):
            raise ValueError(f"normal mean must be finite, got {self.mean}")
        if not (math.isfinite(self.stdev) and self.stdev > 0.0):
            raise ValueError(f"normal stdev must be finite and > 0, got {self.stdev}")

    @property
    def variance(self) -> float:
        return self.stdev * self.stdev


def log_severities(severities: Iterable[float]) -> tuple[float, ...]:
    """Log of raw loss amounts; zero or negative amounts are rejected."""
    out = []
    for i, x in enumerate(severities):
        if not (x > 0.0 and math.isfinite(x)):
            raise ValueError(f"severity #{i + 1} must be finite and > 0, got {x}")
        out.append(math.log(x))
    return tuple(out)


def _check_sigma(obs_sigma: float) -> float:
    if not (math.isfinite(obs_sigma) and obs_sigma > 0.0):
        raise ValueError(f"obs_sigma must be finite and > 0, got {obs_sigma}")
    return float(obs_sigma)


def _precisions(prior: NormalParams, obs_sigma: float, n_losses: int,
                panel: ExpertPanel) -> tuple[float, float, float]:
    p_prior = 1.0 / prior.variance
    p_data = n_losses / (obs_sigma * obs_sigma)
    p_expert = panel.size / (panel.xi * panel.xi) if panel.size else 0.0
    return p_prior, p_data, p_expert


def lognormal_posterior(prior: NormalParams, obs_sigma: float,
                        log_losses: Sequence[float],
                        panel: ExpertPanel = NO_EXPERTS) -> NormalParams:
    """Normal posterior ``N(mu_hat, sigma_hat)`` of the log-location.

    ``sigma_hat^2 = 1 / (1/sigma0^2 + K/sigma^2 + M/xi^2)`` and ``mu_hat`` is the
    precision-weighted sum of the prior mean, the log-losses and the opinions.
    """
    obs_sigma = _check_sigma(obs_sigma)
    p_prior, p_data, p_expert = _precisions(prior, obs_sigma, len(log_losses), panel)
    var_hat = 1.0 / (p_prior + p_data + p_expert)
    weighted = prior.mean * p_prior + sum(log_losses) / (obs_sigma * obs_sigma)
    if panel.size:
        weighted += panel.total / (panel.xi * panel.xi)
    return NormalParams(var_hat * weighted, math.sqrt(var_hat))


def credibility_weights(prior: NormalParams, obs_sigma: float, n_losses: int,
                        panel: ExpertPanel = NO_EXPERTS) -> tuple[float, float, float]:
    """Weights on prior mean, mean log-loss and mean opinion; they sum to one."""
    obs_sigma = _check_sigma(obs_sigma)
    p_prior, p_data, p_expert = _precisions(prior, obs_sigma, n_losses, panel)
    total = p_prior + p_data + p_expert
    return p_prior / total, p_data / total, p_expert / total


def xi_from_opinions_stdev(opinions: Sequence[float]) -> float:
    """Sample standard deviation (divisor M - 1) of the opinions."""
    if len(opinions) < 2:
        raise ValueError("need at least two expert opinions to estimate xi")
    sd = statistics.stdev(opinions)
    if sd == 0.0:
        raise ValueError("identical expert opinions: xi would be zero")
    return sd


@dataclass(frozen=True)
class LognormalCellState:
    prior: NormalParams
    obs_sigma: float
    log_losses: tuple[float, ...] = ()
    panel: ExpertPanel = NO_EXPERTS
    posterior: NormalParams = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "obs_sigma", _check_sigma(self.obs_sigma))
        object.__setattr__(self, "log_losses", tuple(float(v) for v in self.log_losses))
        object.__setattr__(
            self, "posterior",
            lognormal_posterior(self.prior, self.obs_sigma, self.log_losses, self.panel),
        )

    @classmethod
    def from_severities(cls, prior: NormalParams, obs_sigma: float,
                        severities: Iterable[float] = (),
                        panel: ExpertPanel = NO_EXPERTS) -> "LognormalCellState":
        return cls(prior, obs_sigma, log_severities(severities), panel)

    @property
    def n_losses(self) -> int:
        return len(self.log_losses)

    def weights(self) -> tuple[float, float, float]:
        return credibility_weights(self.prior, self.obs_sigma, self.n_losses, self.panel)

    def without_experts(self) -> "LognormalCellState":
        return replace(self, panel=NO_EXPERTS)


def lognormal_update_loss(state: LognormalCellState, severity: float) -> LognormalCellState:
    return replace(state, log_losses=state.log_losses + log_severities([severity]))
