"""Predictive annual-loss simulation and VaR per risk cell.

Each simulated year draws fresh parameters from the posteriors (frequency
intensity and severity parameter), then a Poisson count and that many
severities; the annual loss is their sum (zero when the count is zero).

Paths are generated in fixed-size blocks, each with its own stream spawned
from the master seed. Results therefore do not depend on the number of
worker threads.

Pareto cells may have infinite-mean draws; only quantiles are reported for
them.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .frequency import FrequencyCellState
from .gig import gig_mean, gig_sample
from .lognormal import LognormalCellState
from .pareto import ParetoCellState

__all__ = [
    "BLOCK_SIZE",
    "AGGREGATION_NOTE",
    "CellModel",
    "PredictiveSample",
    "SimulatedLosses",
    "VarEstimate",
    "LevelMismatchError",
    "simulate_annual_losses",
    "empirical_var",
    "aggregate_var_sum",
    "sample_poisson",
    "sample_lognormal",
    "sample_pareto",
    "pareto_from_uniform",
]

BLOCK_SIZE = 8192
AGGREGATION_NOTE = (
    "sum of per-cell VaRs; equivalent to assuming perfect dependence between cells"
)


class LevelMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class CellModel:
    frequency: FrequencyCellState
    severity: LognormalCellState | ParetoCellState
    name: str = "cell"

    def __post_init__(self):
        if not isinstance(self.severity, (LognormalCellState, ParetoCellState)):
            raise TypeError(f"unsupported severity model {type(self.severity).__name__}")

    @property
    def volume(self) -> float:
        return self.frequency.volume


@dataclass(frozen=True)
class PredictiveSample:
    lambda_draw: float
    severity_param_draw: float
    count: int
    total: float


@dataclass(frozen=True)
class SimulatedLosses:
    """Column-wise storage of simulated years; iterates as PredictiveSample."""

    lambda_draws: np.ndarray
    severity_param_draws: np.ndarray
    counts: np.ndarray
    totals: np.ndarray

    def __len__(self) -> int:
        return len(self.totals)

    def __getitem__(self, i: int) -> PredictiveSample:
        return PredictiveSample(
            float(self.lambda_draws[i]),
            float(self.severity_param_draws[i]),
            int(self.counts[i]),
            float(self.totals[i]),
        )

    def __iter__(self) -> Iterator[PredictiveSample]:
        return (self[i] for i in range(len(self)))


@dataclass(frozen=True)
class VarEstimate:
    level: float
    value: float
    n_sims: int
    standard_error_note: str = ""


# ---------------------------------------------------------------------------
# Elementary samplers
# ---------------------------------------------------------------------------


def sample_poisson(mean, rng: np.random.Generator, size=None):
    """Exact Poisson draws (numpy: inversion for small means, PTRS otherwise)."""
    if np.any(np.asarray(mean) < 0):
        raise ValueError("Poisson mean must be >= 0")
    return rng.poisson(mean, size)


def sample_lognormal(mu, sigma, rng: np.random.Generator, size=None):
    """``exp(mu + sigma * Z)`` with standard normal ``Z``."""
    if np.any(np.asarray(sigma) <= 0):
        raise ValueError("lognormal sigma must be > 0")
    return np.exp(mu + sigma * rng.standard_normal(size))


def pareto_from_uniform(u, gamma, threshold):
    """Inverse CDF ``L * u^(-1/gamma)`` for ``u`` in (0, 1]."""
    with np.errstate(over="ignore"):
        return threshold * np.power(u, -1.0 / np.asarray(gamma, dtype=float))


def sample_pareto(gamma, threshold: float, rng: np.random.Generator, size=None):
    if np.any(np.asarray(gamma) <= 0) or threshold <= 0:
        raise ValueError("Pareto needs gamma > 0 and threshold > 0")
    u = 1.0 - rng.random(size)  # (0, 1]
    return pareto_from_uniform(u, gamma, threshold)


# ---------------------------------------------------------------------------
# Simulation
# ---------------------------------------------------------------------------


def _block_generators(rng, n_blocks: int) -> list[np.random.Generator]:
    if isinstance(rng, np.random.Generator):
        return rng.spawn(n_blocks)
    seq = rng if isinstance(rng, np.random.SeedSequence) else np.random.SeedSequence(rng)
    return [np.random.default_rng(s) for s in seq.spawn(n_blocks)]


def _simulate_block(cell: CellModel, size: int, rng: np.random.Generator,
                    parameter_uncertainty: bool):
    freq = cell.frequency.posterior
    sev = cell.severity
    if parameter_uncertainty:
        lam = np.asarray(gig_sample(freq, rng, size), dtype=float)
    else:
        lam = np.full(size, gig_mean(freq))
    counts = sample_poisson(cell.volume * lam, rng)
    path = np.repeat(np.arange(size), counts)
    n_losses = int(counts.sum())

    if isinstance(sev, LognormalCellState):
        post = sev.posterior
        if parameter_uncertainty:
            theta = rng.normal(post.mean, post.stdev, size)
        else:
            theta = np.full(size, post.mean)
        losses = sample_lognormal(theta[path], sev.obs_sigma, rng, n_losses)
    else:
        if parameter_uncertainty:
            theta = np.asarray(gig_sample(sev.posterior, rng, size), dtype=float)
        else:
            theta = np.full(size, gig_mean(sev.posterior))
        losses = sample_pareto(theta[path], sev.threshold, rng, n_losses)

    totals = np.bincount(path, weights=losses, minlength=size).astype(float)
    return lam, theta, counts, totals


def simulate_annual_losses(cell: CellModel, n_sims: int, rng=None, *,
                           parameter_uncertainty: bool = True, workers: int = 1,
                           block_size: int = BLOCK_SIZE) -> SimulatedLosses:
    """Simulate ``n_sims`` predictive annual losses for one cell.

    Parameters
    ----------
    cell : CellModel
    n_sims : int
        Number of simulated years, ``>= 1``.
    rng : int, SeedSequence, Generator or None
        Master seed. Block streams are spawned from it.
    parameter_uncertainty : bool
        If False, parameters are fixed at their posterior means.
    workers : int
        Threads used to run blocks. Does not change the result.
    block_size : int
        Paths per block. Part of the reproducibility contract: changing it
        changes the random streams.
    """
    n_sims = int(n_sims)
    if n_sims < 1:
        raise ValueError(f"n_sims must be >= 1, got {n_sims}")
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    n_blocks = math.ceil(n_sims / block_size)
    gens = _block_generators(rng, n_blocks)
    sizes = [min(block_size, n_sims - j * block_size) for j in range(n_blocks)]

    def run(j):
        return _simulate_block(cell, sizes[j], gens[j], parameter_uncertainty)

    if workers == 1 or n_blocks == 1:
        parts = [run(j) for j in range(n_blocks)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, range(n_blocks)))
    lam, theta, counts, totals = (np.concatenate(cols) for cols in zip(*parts))
    return SimulatedLosses(lam, theta, counts, totals)


# ---------------------------------------------------------------------------
# VaR
# ---------------------------------------------------------------------------


def _order_index(level: float, n: int) -> int:
    # ceil(level * n) with float noise removed (0.95 * 100 must give 95)
    return min(max(math.ceil(round(level * n, 9)), 1), n)


def empirical_var(samples, level: float) -> VarEstimate:
    """VaR as the ``ceil(level * n)``-th smallest simulated total (1-based)."""
    if not 0.0 < level < 1.0:
        raise ValueError(f"level must lie in (0, 1), got {level}")
    totals = samples.totals if isinstance(samples, SimulatedLosses) else samples
    totals = np.sort(np.asarray(totals, dtype=float))
    n = totals.size
    if n == 0:
        raise ValueError("no samples")
    k = _order_index(level, n)
    half = 1.96 * math.sqrt(n * level * (1.0 - level))
    lo = totals[min(max(int(math.floor(k - half)), 1), n) - 1]
    hi = totals[min(max(int(math.ceil(k + half)), 1), n) - 1]
    note = (
        f"order statistic {k} of {n}; distribution-free 95% interval "
        f"[{lo:.6g}, {hi:.6g}]"
    )
    return VarEstimate(level, float(totals[k - 1]), n, note)


def aggregate_var_sum(cells: Sequence[VarEstimate]) -> float:
    """Total capital as the plain sum of per-cell VaRs at a common level.

    Adding quantiles corresponds to perfect dependence between cells
    (see :data:`AGGREGATION_NOTE`).
    """
    if not cells:
        raise ValueError("no cell VaRs to aggregate")
    levels = {v.level for v in cells}
    if len(levels) != 1:
        raise LevelMismatchError(f"cannot add VaRs at different levels {sorted(levels)}")
    return float(sum(v.value for v in cells))
