import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import FREQ_COUNTS, FREQ_PRIOR
from oracles import gig_moment_quad
from opbayes.experts import NO_EXPERTS, ExpertPanel
from opbayes.frequency import (
    FrequencyCellState,
    freq_bayes_estimate,
    freq_mle,
    freq_mode_approx_estimate,
    freq_mode_estimate,
    freq_posterior,
    freq_posterior_gig_prior,
    freq_two_source_estimate,
    freq_update_year,
)
from opbayes.gig import GammaParams, GigParams, gig_mode, gig_mode_approx

# frozen from oracles.gig_moment_quad on GIG(8.407, 15 + 1/0.147, 2.8)
BAYES_EXPERT_07 = 0.6424645638245755
# same with the opinion 0.4 (phi = 1.6)
BAYES_EXPERT_04 = 0.5691470679628288
# credibility formula at k = 15 in exact rational arithmetic
TWO_SOURCE_K15 = 0.6149232449297972


def test_example_posterior_parameters(freq_panel):
    post = freq_posterior(FREQ_PRIOR, 1.0, FREQ_COUNTS, freq_panel)
    assert post == GigParams(8.407, 15 + 1 / 0.147, 2.8)


def test_example_bayes_estimate(freq_panel):
    state = FrequencyCellState.create(FREQ_PRIOR, 1.0, FREQ_COUNTS, freq_panel)
    oracle = gig_moment_quad(8.407, 15 + 1 / 0.147, 2.8)
    assert freq_bayes_estimate(state) == pytest.approx(oracle, rel=1e-8)
    assert freq_bayes_estimate(state) == pytest.approx(BAYES_EXPERT_07, rel=1e-12)


def test_low_expert_estimate():
    panel = ExpertPanel((0.4,), 4.0)
    state = FrequencyCellState.create(FREQ_PRIOR, 1.0, FREQ_COUNTS, panel)
    assert freq_bayes_estimate(state) == pytest.approx(BAYES_EXPERT_04, rel=1e-12)


def test_empty_state_is_prior():
    state = FrequencyCellState.create(FREQ_PRIOR)
    assert state.posterior == FREQ_PRIOR.as_gig()
    assert freq_bayes_estimate(FrequencyCellState.create(GammaParams(3.407, 0.147))) == \
        pytest.approx(0.5, abs=1e-3)


def test_no_experts_is_gamma_conjugate():
    post = freq_posterior(FREQ_PRIOR, 2.0, FREQ_COUNTS)
    alpha = FREQ_PRIOR.shape + sum(FREQ_COUNTS)
    beta = FREQ_PRIOR.scale / (2.0 * 15 * FREQ_PRIOR.scale + 1)
    assert post.phi == 0.0
    assert post.nu == pytest.approx(alpha - 1, rel=1e-15)
    assert post.omega == pytest.approx(1 / beta, rel=1e-15)


def test_gig_prior_embedding(freq_panel):
    a = freq_posterior(FREQ_PRIOR, 1.0, FREQ_COUNTS, freq_panel)
    b = freq_posterior_gig_prior(FREQ_PRIOR.as_gig(), 1.0, FREQ_COUNTS, freq_panel)
    assert a == b


def test_gig_prior_single_year():
    prior = GigParams(1.5, 2.0, 0.3)
    assert freq_posterior_gig_prior(prior, 1.7, [2]) == GigParams(3.5, 3.7, 0.3)
    assert freq_posterior_gig_prior(prior, 1.7, []) == prior


def test_update_year_changes_expected_fields(freq_panel):
    state = FrequencyCellState.create(FREQ_PRIOR, 1.3, FREQ_COUNTS[:4], freq_panel)
    nxt = freq_update_year(state, 0)
    assert nxt.posterior.nu == state.posterior.nu
    assert nxt.posterior.omega == pytest.approx(state.posterior.omega + 1.3, rel=1e-15)
    assert nxt.posterior.phi == state.posterior.phi
    assert freq_update_year(nxt, 3).posterior.nu == nxt.posterior.nu + 3


def test_sequential_equals_batch(freq_panel):
    state = FrequencyCellState.create(FREQ_PRIOR, 1.0, (), freq_panel)
    for n in FREQ_COUNTS:
        state = freq_update_year(state, n)
    assert state.posterior == freq_posterior(FREQ_PRIOR, 1.0, FREQ_COUNTS, freq_panel)


@settings(max_examples=200, deadline=None)
@given(
    st.lists(st.integers(0, 50), max_size=40),
    st.floats(0.01, 100),
    st.lists(st.floats(0.01, 10), max_size=4),
    st.floats(0.01, 50),
)
def test_sequential_equals_batch_property(counts, volume, opinions, xi):
    panel = ExpertPanel(tuple(opinions), xi) if opinions else NO_EXPERTS
    prior = GammaParams(2.0, 0.3)
    state = FrequencyCellState.create(prior, volume, (), panel)
    for n in counts:
        state = freq_update_year(state, n)
        assert state.posterior.phi == freq_posterior(prior, volume, (), panel).phi
    assert state.posterior == freq_posterior(prior, volume, counts, panel)


def test_invalid_inputs():
    with pytest.raises(ValueError):
        FrequencyCellState.create(FREQ_PRIOR, 0.0)
    with pytest.raises(ValueError):
        FrequencyCellState.create(FREQ_PRIOR, 1.0, [1, -1])
    with pytest.raises(ValueError):
        FrequencyCellState.create(FREQ_PRIOR, 1.0, [], ExpertPanel((-0.1,), 4.0))


def test_mle():
    assert freq_mle(FREQ_COUNTS) == 10 / 15
    assert freq_mle([0, 0, 0]) == 0.0
    assert freq_mle(FREQ_COUNTS, 2.0) == freq_mle(FREQ_COUNTS) / 2
    with pytest.raises(ValueError):
        freq_mle([])


def test_two_source():
    assert freq_two_source_estimate(FREQ_PRIOR, 1.0, []) == FREQ_PRIOR.mean
    assert freq_two_source_estimate(FREQ_PRIOR, 1.0, FREQ_COUNTS) == pytest.approx(
        TWO_SOURCE_K15, rel=1e-15)
    wide = GammaParams(0.5e-12, 1e12)
    assert freq_two_source_estimate(wide, 2.0, FREQ_COUNTS) == pytest.approx(
        freq_mle(FREQ_COUNTS, 2.0), rel=1e-9)


def test_two_source_equals_posterior_mean_without_experts():
    for k in range(16):
        state = FrequencyCellState.create(FREQ_PRIOR, 1.0, FREQ_COUNTS[:k])
        assert freq_bayes_estimate(state) == pytest.approx(
            freq_two_source_estimate(FREQ_PRIOR, 1.0, FREQ_COUNTS[:k]), rel=1e-13)


def test_mode_estimators(freq_panel):
    state = FrequencyCellState.create(FREQ_PRIOR, 1.0, FREQ_COUNTS, freq_panel)
    assert freq_mode_estimate(state) == gig_mode(state.posterior)
    assert freq_mode_approx_estimate(state) == gig_mode_approx(state.posterior)
    assert abs(freq_mode_estimate(state) - freq_bayes_estimate(state)) < 0.05


def test_expert_limit_strong_credibility():
    state = FrequencyCellState.create(FREQ_PRIOR, 1.0, FREQ_COUNTS, ExpertPanel((0.7,), 1e8))
    assert abs(freq_bayes_estimate(state) - 0.7) < 1e-3


def test_expert_limit_weak_credibility():
    state = FrequencyCellState.create(FREQ_PRIOR, 1.0, FREQ_COUNTS, ExpertPanel((0.7,), 1e-8))
    two = freq_two_source_estimate(FREQ_PRIOR, 1.0, FREQ_COUNTS)
    assert abs(freq_bayes_estimate(state) - two) < 1e-3


def test_prior_limit(freq_panel):
    c = 1e6
    tight = GammaParams(FREQ_PRIOR.shape * c, FREQ_PRIOR.scale / c)
    state = FrequencyCellState.create(tight, 1.0, FREQ_COUNTS, freq_panel)
    assert abs(freq_bayes_estimate(state) - FREQ_PRIOR.mean) < 1e-3


def test_data_limit():
    rng = np.random.default_rng(2024)
    counts = rng.poisson(0.6, 10_000)
    state = FrequencyCellState.create(FREQ_PRIOR, 1.0, counts, ExpertPanel((0.7,), 4.0))
    assert abs(freq_bayes_estimate(state) - 0.6) < 0.05


def test_estimate_is_finite_for_long_histories():
    counts = [3] * 100_000
    state = FrequencyCellState.create(FREQ_PRIOR, 1.0, counts, ExpertPanel((0.7,), 4.0))
    assert math.isfinite(freq_bayes_estimate(state))
    assert freq_bayes_estimate(state) == pytest.approx(3.0, rel=1e-4)
