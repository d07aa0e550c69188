"""
Estimating moments from random measurements
===========================================

Second moments can be measured without a shared reference frame: pick a
random axis per qubit, record the correlation, and average its square.
"""
import numpy as np

from marginal_moments import EstimatorConfig, estimate_moment, moment_from_design
from marginal_moments.states import bell_state

rho = bell_state()

# With exact expectation values (shots=0) the only noise comes from the
# finite number of random settings. The true value is 3.
for settings in (1_000, 10_000, 100_000):
    est = estimate_moment(rho, EstimatorConfig((1, 2), settings, seed=1))
    print(f"{settings:>7d} settings: {est.value:.4f} +/- {est.stderr:.4f}")

# Finite shots add binomial noise. The pair estimator stays unbiased even
# with a handful of shots per setting.
est = estimate_moment(rho, EstimatorConfig((1, 2), 20_000, shots=4, seed=2))
print(f"4 shots per setting: {est.value:.4f} +/- {est.stderr:.4f}")

# The 3^k Pauli-axis products form a design, so they give the moment exactly.
print("design, exact:", moment_from_design(rho, (1, 2)).value)
est = moment_from_design(rho, (1, 2), shots=1_000, rng=np.random.default_rng(3))
print(f"design, 1000 shots: {est.value:.4f} +/- {est.stderr:.4f}")
