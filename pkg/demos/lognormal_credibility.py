"""Lognormal severity: the posterior location as a credibility blend.

The posterior mean of the log-location is a convex combination of the
prior mean, the mean log-loss and the mean expert opinion. The weights
shift from prior to data as losses accumulate.
"""

import numpy as np

from opbayes import ExpertPanel, LognormalCellState, NormalParams

rng = np.random.default_rng(3)
severities = np.exp(rng.normal(1.2, 0.8, 40))
prior = NormalParams(0.8, 0.5)
panel = ExpertPanel((1.0, 1.4), 0.6)

print(" K   w_prior  w_data  w_expert   posterior mean  sd")
for k in (0, 1, 3, 10, 40):
    state = LognormalCellState.from_severities(prior, 0.8, severities[:k], panel)
    w = state.weights()
    post = state.posterior
    print(f"{k:2d}   {w[0]:.3f}    {w[1]:.3f}   {w[2]:.3f}      {post.mean:.4f}        {post.stdev:.4f}")
