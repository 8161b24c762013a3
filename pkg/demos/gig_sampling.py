"""Exact draws from the generalized inverse Gaussian posterior.

Compares Monte Carlo moments with the Bessel-ratio formulas and the
empirical CDF with the quadrature CDF at a few points.
"""

import numpy as np

from opbayes import GigParams, gig_cdf, gig_moment, gig_sample

params = GigParams(8.407, 15 + 1 / 0.147, 2.8)
x = gig_sample(params, np.random.default_rng(1), 100_000)

for order in (1, 2):
    print(f"E[X^{order}]: exact {gig_moment(params, order):.6f}, sample {np.mean(x ** order):.6f}")
for q in (0.4, 0.6, 0.8):
    print(f"P[X <= {q}]: exact {gig_cdf(params, q):.4f}, sample {np.mean(x <= q):.4f}")
