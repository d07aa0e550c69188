"""Orthogonal Hermitian operator bases (generalized Gell-Mann matrices).

Every basis returned here is normalized so that ``tr(l_i l_j) = d * delta_ij``
and ``l_0`` is the identity. For ``d = 2`` the basis is ``(I, X, Y, Z)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

__all__ = [
    "OperatorBasis",
    "gellmann_basis",
    "pauli_basis",
    "tensor_basis_element",
    "PAULI_X",
    "PAULI_Y",
    "PAULI_Z",
]

MAX_DIM = 16

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
for _m in (PAULI_X, PAULI_Y, PAULI_Z):
    _m.setflags(write=False)


@dataclass(frozen=True, eq=False)
class OperatorBasis:
    """A complete set of ``d**2`` Hermitian operators on a ``d``-level system.

    Attributes
    ----------
    dim : int
        Local Hilbert space dimension ``d``.
    elements : numpy.ndarray
        Read-only array of shape ``(d**2, d, d)``; ``elements[0]`` is the identity.
    """

    dim: int
    elements: np.ndarray

    def __len__(self) -> int:
        return self.elements.shape[0]

    def __getitem__(self, i: int) -> np.ndarray:
        return self.elements[i]

    def __iter__(self):
        return iter(self.elements)

    def gram(self) -> np.ndarray:
        """Hilbert-Schmidt Gram matrix ``tr(l_i l_j)``; equals ``d * I``."""
        return np.einsum("iab,jba->ij", self.elements, self.elements)


def _check_dim(d: int) -> None:
    if int(d) != d or d < 2:
        raise ValueError(f"local dimension must be an integer >= 2, got {d!r}")
    if d > MAX_DIM:
        raise ValueError(f"local dimension {d} exceeds supported maximum {MAX_DIM}")


@lru_cache(maxsize=None)
def _gellmann_elements(d: int) -> np.ndarray:
    sym, anti, diag = [], [], []
    for j in range(d):
        for k in range(j + 1, d):
            m = np.zeros((d, d), dtype=complex)
            m[j, k] = m[k, j] = 1
            sym.append(m)
            m = np.zeros((d, d), dtype=complex)
            m[j, k] = -1j
            m[k, j] = 1j
            anti.append(m)
    for l in range(1, d):
        entries = np.zeros(d, dtype=complex)
        entries[:l] = 1
        entries[l] = -l
        diag.append(np.sqrt(2.0 / (l * (l + 1))) * np.diag(entries))
    # conventional generators have tr(g^2) = 2; rescale to tr = d
    scale = np.sqrt(d / 2.0)
    elements = np.array([np.eye(d, dtype=complex)] + [scale * m for m in sym + anti + diag])
    elements.setflags(write=False)
    return elements


def gellmann_basis(d: int) -> OperatorBasis:
    """Generalized Gell-Mann basis of dimension ``d``.

    Ordering is identity, then symmetric, antisymmetric and diagonal
    generators, each block in lexicographic ``(j, k)`` order. For ``d = 2``
    this gives ``(I, X, Y, Z)``.

    Parameters
    ----------
    d : int
        Local dimension, ``2 <= d <= 16``.

    Returns
    -------
    OperatorBasis

    Examples
    --------
    >>> b = gellmann_basis(2)
    >>> np.allclose(b[3], np.diag([1, -1]))
    True
    """
    _check_dim(d)
    return OperatorBasis(int(d), _gellmann_elements(int(d)))


def pauli_basis() -> OperatorBasis:
    return gellmann_basis(2)


def tensor_basis_element(bases: Sequence[OperatorBasis], indices: Sequence[int]) -> np.ndarray:
    """Kronecker product ``l_{i_1} (x) ... (x) l_{i_N}`` of per-site basis elements."""
    if len(bases) != len(indices):
        raise ValueError("need exactly one index per basis")
    out = np.ones((1, 1), dtype=complex)
    for basis, i in zip(bases, indices):
        if not 0 <= i < len(basis):
            raise IndexError(f"index {i} out of range for basis of dimension {basis.dim}")
        out = np.kron(out, basis[i])
    return out
