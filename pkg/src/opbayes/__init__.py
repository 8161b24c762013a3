"""Bayesian combination of internal loss data, external priors and expert
opinions for operational-risk frequency and severity parameters."""

__version__ = "0.1.0"

from .calibration import (
    PriorConstraint,
    fit_gamma_from_constraint,
    fit_gamma_moments,
    gamma_from_mean_vco,
    xi_from_opinions_moments,
)
from .capital import (
    CellModel,
    PredictiveSample,
    VarEstimate,
    aggregate_var_sum,
    empirical_var,
    simulate_annual_losses,
)
from .experts import ExpertPanel
from .frequency import (
    FrequencyCellState,
    freq_bayes_estimate,
    freq_mle,
    freq_mode_estimate,
    freq_posterior,
    freq_posterior_gig_prior,
    freq_two_source_estimate,
    freq_update_year,
)
from .gig import (
    GammaParams,
    GigParams,
    gig_cdf,
    gig_log_pdf,
    gig_mean,
    gig_mode,
    gig_mode_approx,
    gig_moment,
    gig_sample,
)
from .lognormal import (
    LognormalCellState,
    NormalParams,
    credibility_weights,
    lognormal_posterior,
    xi_from_opinions_stdev,
)
from .pareto import (
    ParetoCellState,
    pareto_bayes_estimate,
    pareto_mle,
    pareto_posterior,
    pareto_posterior_gig_prior,
    pareto_update_loss,
)
from .special import bessel_ratio, log_bessel_k
