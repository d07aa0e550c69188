"""Exact second-order marginal moments from Bloch coefficients.

The moment of a subset ``M`` is the squared norm of its marginal vector,
and marginal purities follow from the moments of all subsets of ``M``:

    tr(rho_M^2) = (1 + sum_{M' subset of M} R[M']) / d_M
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .bloch import BlochTensor, marginal_vector
from .states import all_subsets, canonical_subset

__all__ = [
    "MomentSet",
    "moment",
    "moment_set",
    "purity_from_moments",
    "moment_sets_equal",
]


@dataclass(frozen=True)
class MomentSet:
    """Map from every non-empty subset (sorted 1-based tuple) to its moment."""

    dims: tuple[int, ...]
    entries: Mapping[tuple[int, ...], float] = field(default_factory=dict)

    def __getitem__(self, subset: Iterable[int]) -> float:
        return self.entries[canonical_subset(subset, len(self.dims))]

    def __iter__(self):
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def items(self):
        return self.entries.items()

    def total(self) -> float:
        return float(sum(self.entries.values()))


def moment(bt: BlochTensor, subset: Iterable[int]) -> float:
    """``R[rho_M] = ||r^(M)||^2``."""
    return marginal_vector(bt, subset).norm_sq()


def moment_set(bt: BlochTensor) -> MomentSet:
    return MomentSet(bt.dims, {s: moment(bt, s) for s in all_subsets(bt.n_sites)})


def purity_from_moments(ms: MomentSet, subset: Iterable[int]) -> float:
    subset = canonical_subset(subset, len(ms.dims))
    d_sub = int(np.prod([ms.dims[m - 1] for m in subset]))
    total = 1.0
    for s in all_subsets(len(subset)):
        key = tuple(subset[i - 1] for i in s)
        if key not in ms.entries:
            raise KeyError(f"moment set has no entry for subset {key}")
        total += ms.entries[key]
    return total / d_sub


def moment_sets_equal(a: MomentSet, b: MomentSet, tol: float = 1e-10) -> bool:
    if tuple(a.dims) != tuple(b.dims):
        raise ValueError(f"dimension mismatch: {a.dims} vs {b.dims}")
    if set(a.entries) != set(b.entries):
        raise ValueError("moment sets cover different subsets")
    return all(abs(a.entries[s] - b.entries[s]) <= tol for s in a.entries)
