"""Loss frequency from a regulator prior, 15 years of counts and one expert.

Fits the Gamma prior from a mean and an interval probability, then prints
how the Bayes estimate, the prior/data blend and the MLE evolve as years
of data arrive. The counts were simulated with a true intensity of 0.6.
"""

from opbayes import (
    ExpertPanel,
    FrequencyCellState,
    PriorConstraint,
    fit_gamma_from_constraint,
    freq_update_year,
)
from opbayes.trajectory import frequency_trajectory

COUNTS = (0, 0, 0, 0, 1, 0, 1, 1, 1, 0, 2, 1, 1, 2, 0)

prior = fit_gamma_from_constraint(PriorConstraint(0.5, 0.25, 0.75, 2 / 3))
print(f"prior: shape {prior.shape:.4f}, scale {prior.scale:.4f}, mean {prior.mean:.4f}")

for opinion in (0.7, 0.4):
    print(f"\nexpert says {opinion} (xi = 4)")
    print(" k   bayes   prior+data   mle")
    for row in frequency_trajectory(prior, 1.0, COUNTS, ExpertPanel((opinion,), 4.0)):
        mle = "   -  " if row.mle is None else f"{row.mle:.4f}"
        print(f"{row.k:2d}  {row.bayes:.4f}  {row.two_source:.4f}      {mle}")

# the same posterior, one year at a time
state = FrequencyCellState.create(prior, 1.0, (), ExpertPanel((0.7,), 4.0))
for n in COUNTS:
    state = freq_update_year(state, n)
print(f"\nposterior after 15 years: {state.posterior}")
