import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from opbayes.experts import NO_EXPERTS, ExpertPanel
from opbayes.lognormal import (
    LognormalCellState,
    NormalParams,
    credibility_weights,
    log_severities,
    lognormal_posterior,
    lognormal_update_loss,
    xi_from_opinions_stdev,
)

PRIOR = NormalParams(1.0, 2.0)


def test_no_information_is_prior():
    assert lognormal_posterior(PRIOR, 0.5, ()) == PRIOR
    assert credibility_weights(PRIOR, 0.5, 0) == (1.0, 0.0, 0.0)


def test_equal_weight_case():
    post = lognormal_posterior(NormalParams(0.0, 1.0), 1.0, (3.0,), ExpertPanel((3.0,), 1.0))
    assert post.mean == pytest.approx(2.0, rel=1e-15)
    assert post.variance == pytest.approx(1 / 3, rel=1e-15)
    w = credibility_weights(NormalParams(0.0, 1.0), 1.0, 1, ExpertPanel((3.0,), 1.0))
    assert w == pytest.approx((1 / 3, 1 / 3, 1 / 3), rel=1e-15)


def test_synthetic_case_against_rational_arithmetic():
    logs = (0.9, 1.1, 1.0, 1.2)
    opinions = (1.3, 0.8)
    xi = xi_from_opinions_stdev(opinions)
    assert xi == pytest.approx(0.5 / math.sqrt(2), rel=1e-15)
    post = lognormal_posterior(PRIOR, 0.5, logs, ExpertPanel(opinions, xi))
    # xi^2 = 1/8 exactly in rational terms
    F = Fraction
    p0, p1, p2 = F(1, 4), 4 / F(1, 4), 2 / F(1, 8)
    var = 1 / (p0 + p1 + p2)
    mu = var * (F(1) * p0 + sum(F(str(v)) for v in logs) / F(1, 4)
                + sum(F(str(v)) for v in opinions) / F(1, 8))
    assert mu == F(677, 645)
    assert post.mean == pytest.approx(float(mu), rel=1e-13)
    assert post.variance == pytest.approx(float(var), rel=1e-13)


@settings(max_examples=300, deadline=None)
@given(
    st.floats(-5, 5), st.floats(0.05, 5), st.floats(0.05, 5),
    st.lists(st.floats(-5, 10), max_size=30),
    st.lists(st.floats(-5, 10), max_size=5),
    st.floats(0.05, 5),
)
def test_weights_and_weighted_mean(mu0, s0, sigma, logs, opinions, xi):
    prior = NormalParams(mu0, s0)
    panel = ExpertPanel(tuple(opinions), xi) if opinions else NO_EXPERTS
    w1, w2, w3 = credibility_weights(prior, sigma, len(logs), panel)
    assert min(w1, w2, w3) >= 0.0
    assert abs(w1 + w2 + w3 - 1.0) < 1e-12
    post = lognormal_posterior(prior, sigma, logs, panel)
    blend = w1 * mu0
    if logs:
        blend += w2 * math.fsum(logs) / len(logs)
    if opinions:
        blend += w3 * math.fsum(opinions) / len(opinions)
    assert abs(post.mean - blend) <= 1e-12 * max(1.0, abs(blend))


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(-5, 10), min_size=1, max_size=20),
       st.lists(st.floats(-5, 10), min_size=1, max_size=5),
       st.randoms(use_true_random=False))
def test_order_invariance(logs, opinions, rnd):
    a = lognormal_posterior(PRIOR, 0.7, logs, ExpertPanel(tuple(opinions), 0.4))
    logs2, ops2 = list(logs), list(opinions)
    rnd.shuffle(logs2)
    rnd.shuffle(ops2)
    b = lognormal_posterior(PRIOR, 0.7, logs2, ExpertPanel(tuple(ops2), 0.4))
    assert abs(a.mean - b.mean) <= 1e-12 * max(1.0, abs(a.mean))
    assert abs(a.stdev - b.stdev) <= 1e-12 * a.stdev


def test_posterior_stdev_non_increasing():
    sds = [lognormal_posterior(PRIOR, 0.5, [1.0] * k).stdev for k in range(10)]
    assert all(x >= y for x, y in zip(sds, sds[1:]))
    sds = [lognormal_posterior(PRIOR, 0.5, [1.0], ExpertPanel((1.0,) * m, 0.3)).stdev
           if m else lognormal_posterior(PRIOR, 0.5, [1.0]).stdev for m in range(6)]
    assert all(x >= y for x, y in zip(sds, sds[1:]))


def test_data_weight_dominates_with_many_losses():
    w = [credibility_weights(PRIOR, 0.5, k, ExpertPanel((1.0,), 0.3))[1] for k in (10, 100, 10_000)]
    assert w[0] < w[1] < w[2]
    assert w[2] > 0.999


def test_xi_estimator():
    assert xi_from_opinions_stdev([1, 2, 3]) == 1.0
    with pytest.raises(ValueError):
        xi_from_opinions_stdev([1.0])
    with pytest.raises(ValueError):
        xi_from_opinions_stdev([2.0, 2.0])


def test_severities_ingestion():
    assert log_severities([1.0, math.e]) == (0.0, 1.0)
    for bad in (0.0, -3.0, math.nan):
        with pytest.raises(ValueError):
            log_severities([1.0, bad])


def test_state_and_update():
    rng = random.Random(4)
    severities = [math.exp(rng.gauss(1, 0.5)) for _ in range(20)]
    panel = ExpertPanel((1.3, 0.8), 0.35)
    state = LognormalCellState.from_severities(PRIOR, 0.5, (), panel)
    for x in severities:
        state = lognormal_update_loss(state, x)
    batch = LognormalCellState.from_severities(PRIOR, 0.5, severities, panel)
    assert state.posterior == batch.posterior
    assert sum(state.weights()) == pytest.approx(1.0, abs=1e-12)
    assert state.without_experts().posterior == lognormal_posterior(PRIOR, 0.5, batch.log_losses)


def test_invalid_sigma():
    with pytest.raises(ValueError):
        lognormal_posterior(PRIOR, 0.0, ())
    with pytest.raises(ValueError):
        NormalParams(0.0, -1.0)
