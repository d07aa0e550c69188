"""
Bloch tensors and marginal moments
==================================

A walk through the basic objects: Gell-Mann bases, the Bloch tensor of a
state, its marginal vectors and the second-order moments built from them.
"""
import numpy as np

from marginal_moments import bloch_from_state, gellmann_basis, marginal_vector, moment_set
from marginal_moments.moments import purity_from_moments
from marginal_moments.states import bell_state, partial_trace, purity, random_density

# The qubit basis is (I, X, Y, Z). Every element squares to trace 2, the
# local dimension, so the identity coefficient of a state is always 1.
basis = gellmann_basis(2)
print(np.round(basis.gram().real, 12))

# Qutrits get eight traceless generators on top of the identity.
print(len(gellmann_basis(3)), "elements for d=3")

# A Bell state has no local Bloch vectors; all its information sits in the
# two-body correlations, which are diag(1, -1, 1) in the x, y, z frame.
bell = bloch_from_state(bell_state())
print("local (1):", marginal_vector(bell, [1]).values)
print("correlations:\n", marginal_vector(bell, [1, 2]).values.reshape(3, 3))

# The moment set collects squared norms of every marginal vector.
ms = moment_set(bell)
for subset, value in ms.items():
    print(subset, round(value, 12))

# Purities of every reduced state follow from the moments alone. Compare
# with direct partial traces on a random three-qubit state.
rng = np.random.default_rng(0)
rho = random_density((2, 2, 2), rng)
ms = moment_set(bloch_from_state(rho))
for subset in [(1,), (2, 3), (1, 2, 3)]:
    print(subset, purity_from_moments(ms, subset), purity(partial_trace(rho, subset)))
