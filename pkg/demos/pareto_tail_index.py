"""Pareto tail index from 15 large losses, a Gamma prior and one expert.

The losses were simulated from a Pareto law with tail index 4 above the
threshold 1. Few data make the MLE jumpy; the Bayes estimate moves less.
"""

import statistics

import numpy as np

from opbayes import ExpertPanel, GammaParams, ParetoCellState, pareto_bayes_estimate
from opbayes.trajectory import pareto_trajectory

LOSSES = (1.17, 1.29, 1.00, 1.55, 2.66, 1.02, 1.28, 1.10, 1.06, 1.02,
          1.59, 1.35, 1.91, 1.23, 1.03)
prior = GammaParams(4.0, 9 / 8)  # mean 4.5, Vco 0.5
panel = ExpertPanel((3.5,), 4.0)

rows = pareto_trajectory(prior, 1.0, LOSSES, panel)
print(" k   bayes   no expert   mle")
for row in rows:
    mle = "  -  " if row.mle is None else f"{row.mle:.3f}"
    print(f"{row.k:2d}  {row.bayes:.3f}   {row.two_source:.3f}     {mle}")

tail = rows[3:]
print("\nstdev of year-on-year moves, k >= 3:")
print(f"  bayes {statistics.stdev(np.diff([r.bayes for r in tail])):.3f}")
print(f"  mle   {statistics.stdev(np.diff([r.mle for r in tail])):.3f}")

state = ParetoCellState.create(prior, 1.0, LOSSES, panel)
print(f"\nposterior {state.posterior}, Bayes estimate {pareto_bayes_estimate(state):.4f}")
