"""
Same moments, different states
==============================

A separable two-qubit state and a one-parameter family of rotated
partners share every second-order marginal moment, yet some partners are
entangled.
"""
import math

from marginal_moments import CeParams, base_state, build_ce, entanglement_report, moment_set
from marginal_moments import bloch_from_state
from marginal_moments.counterexamples import ce_positive, scan_ce

base = base_state()
print("base moments:", dict(moment_set(bloch_from_state(base)).items()))
print("base:", entanglement_report(base))

s = 1 / math.sqrt(3)
p = CeParams(s, s, s)
rotated = build_ce(p)
print("rotated moments:", dict(moment_set(bloch_from_state(rotated)).items()))
print("rotated:", entanglement_report(rotated))

# Not every rotated correlation vector is allowed: the matrix must stay
# positive. A pure x(x)y correlation is already outside.
print("(1, 0, 0) allowed?", ce_positive(CeParams(1, 0, 0)))

# Sweep the sphere and locate the most entangled partner.
records = [r for r in scan_ce(0.05) if r.positive]
best = max(records, key=lambda r: r.eof)
print(f"{len(records)} valid grid points; max E_F {best.eof:.4f} at "
      f"({best.a:.3f}, {best.b:.3f}, {best.c:.3f})")
