"""Generalized Bloch tensors.

A state on ``d_1 x ... x d_N`` is expanded as

    rho = (1/d) sum_i r[i_1, ..., i_N] l_{i_1} (x) ... (x) l_{i_N}

over tensor products of Gell-Mann bases. ``r[0, ..., 0] = 1`` and the
coefficients with nonzero indices exactly on a subset ``M`` form the
marginal vector of ``M``, flattened row-major in ascending site order.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

import numpy as np

from .operators import gellmann_basis
from .states import POSITIVITY_TOL, DensityMatrix, StateError, canonical_subset

__all__ = [
    "BlochTensor",
    "MarginalVector",
    "bloch_from_state",
    "state_from_bloch",
    "marginal_vector",
    "correlation_matrix",
    "tensor_from_marginals",
]


@dataclass(frozen=True, eq=False)
class BlochTensor:
    """Real coefficient array of shape ``(d_1**2, ..., d_N**2)``."""

    dims: tuple[int, ...]
    coeffs: np.ndarray

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        c = np.array(self.coeffs, dtype=float)
        if c.shape != tuple(d * d for d in dims):
            raise ValueError(f"coefficient shape {c.shape} does not match dims {dims}")
        if c[(0,) * len(dims)] != 1.0:
            raise ValueError("all-zero coefficient must equal 1")
        c.setflags(write=False)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "coeffs", c)

    @property
    def n_sites(self) -> int:
        return len(self.dims)

    @property
    def dim(self) -> int:
        return int(np.prod(self.dims))

    def norm_sq(self) -> float:
        """Squared norm of all non-trivial coefficients; at most ``d - 1`` for states."""
        return float(np.sum(self.coeffs**2) - 1.0)


@dataclass(frozen=True, eq=False)
class MarginalVector:
    subset: tuple[int, ...]
    values: np.ndarray

    def __len__(self) -> int:
        return self.values.size

    def norm_sq(self) -> float:
        return float(self.values @ self.values)


@lru_cache(maxsize=32)
def _operator_stack(dims: tuple[int, ...]) -> np.ndarray:
    """All tensor-product basis elements, shape ``(prod d_n**2, d, d)``, row-major in the multi-index."""
    stack = np.ones((1, 1, 1), dtype=complex)
    for d in dims:
        el = gellmann_basis(d).elements
        stack = np.einsum("kab,lcd->klacbd", stack, el).reshape(
            stack.shape[0] * el.shape[0], stack.shape[1] * d, stack.shape[2] * d
        )
    stack.setflags(write=False)
    return stack


def bloch_from_state(rho: DensityMatrix) -> BlochTensor:
    """Coefficients ``r_i = tr(rho l_i)`` for every multi-index ``i``."""
    stack = _operator_stack(rho.dims)
    r = np.einsum("kab,ba->k", stack, rho.matrix).real
    r = r.reshape(tuple(d * d for d in rho.dims))
    r[(0,) * rho.n_sites] = 1.0
    return BlochTensor(rho.dims, r)


def state_from_bloch(bt: BlochTensor, validate: bool = False) -> DensityMatrix:
    """Rebuild ``rho`` from its Bloch tensor.

    The result is Hermitian with unit trace but need not be positive. With
    ``validate=True`` a :class:`StateError` is raised when its smallest
    eigenvalue is below ``-1e-10``.
    """
    stack = _operator_stack(bt.dims)
    m = np.tensordot(bt.coeffs.ravel(), stack, axes=1) / bt.dim
    m = (m + m.conj().T) / 2
    rho = DensityMatrix(m, bt.dims)
    if validate:
        lo = np.linalg.eigvalsh(rho.matrix)[0]
        if lo < -POSITIVITY_TOL:
            raise StateError(f"Bloch data does not describe a positive state (min eigenvalue {lo:.3g})")
    return rho


def _marginal_index(n_sites: int, subset: tuple[int, ...]):
    return tuple(slice(1, None) if (n + 1) in subset else 0 for n in range(n_sites))


def marginal_vector(bt: BlochTensor, subset: Iterable[int]) -> MarginalVector:
    """Coefficients with nonzero index exactly on ``subset`` (1-based labels)."""
    subset = canonical_subset(subset, bt.n_sites)
    values = bt.coeffs[_marginal_index(bt.n_sites, subset)].ravel().copy()
    values.setflags(write=False)
    return MarginalVector(subset, values)


def correlation_matrix(bt: BlochTensor) -> np.ndarray:
    """3x3 two-qubit correlation matrix ``T[i, j] = r_{ij}``, ``i, j`` in ``x, y, z``."""
    if bt.dims != (2, 2):
        raise ValueError(f"correlation matrix needs two qubits, got dims {bt.dims}")
    return bt.coeffs[1:, 1:].copy()


def tensor_from_marginals(dims, marginals: dict) -> BlochTensor:
    """Assemble a Bloch tensor from a ``{subset: vector}`` mapping; missing subsets are zero."""
    dims = tuple(int(d) for d in dims)
    coeffs = np.zeros(tuple(d * d for d in dims))
    coeffs[(0,) * len(dims)] = 1.0
    for subset, values in marginals.items():
        subset = canonical_subset(subset, len(dims))
        shape = tuple(dims[m - 1] ** 2 - 1 for m in subset)
        coeffs[_marginal_index(len(dims), subset)] = np.asarray(values, dtype=float).reshape(shape)
    return BlochTensor(dims, coeffs)
