"""
Certifying local-unitary non-equivalence
========================================

Equal moment sets say each marginal vector is a rotation of its partner,
but not that one product of local rotations does the job for all of them
at once. The two-qubit correlation matrix makes the gap visible.
"""
import math

import numpy as np

from marginal_moments import CeParams, base_state, bloch_from_state, build_ce, lu_verdict
from marginal_moments.bloch import correlation_matrix
from marginal_moments.luequiv import mirsky_bound, product_rotation_residual, rotation_between, su2_to_so3
from marginal_moments.sampling import haar_su2
from marginal_moments.states import apply_local_unitary, random_density, random_local_unitary

rng = np.random.default_rng(4)

# A qubit unitary acts on Bloch vectors as a 3x3 rotation; U and -U agree.
u = haar_su2(rng)
print(np.allclose(su2_to_so3(u), su2_to_so3(-u)))

s = 1 / math.sqrt(3)
ta = correlation_matrix(bloch_from_state(base_state()))
tb = correlation_matrix(bloch_from_state(build_ce(CeParams(s, s, s))))

# Each correlation vector alone can be rotated onto the other ...
q = rotation_between(ta.ravel(), tb.ravel())
print("9x9 rotation maps one onto the other:", np.allclose(q @ ta.ravel(), tb.ravel()))

# ... but no product Q1 (x) Q2 can, because singular values differ.
print("singular values:", np.linalg.svd(ta, compute_uv=False), np.linalg.svd(tb, compute_uv=False))
print("lower bound", mirsky_bound(ta, tb), "best found", product_rotation_residual(ta, tb)[0])
print(lu_verdict(base_state(), build_ce(CeParams(s, s, s))))

# Genuinely LU-related states pass every check, but two or more qubits can
# never be certified equivalent from second-order data.
rho = random_density((2, 2), rng)
print(lu_verdict(rho, apply_local_unitary(rho, random_local_unitary((2, 2), rng))))
