"""Density matrices on composite systems.

Subsystems are labelled ``1..N`` throughout the package, and subsets of
subsystems are passed as iterables of those labels.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "POSITIVITY_TOL",
    "StateError",
    "DensityMatrix",
    "canonical_subset",
    "all_subsets",
    "from_ket",
    "maximally_mixed",
    "bell_state",
    "tensor_states",
    "partial_trace",
    "purity",
    "spectrum",
    "is_positive",
    "random_density",
    "random_pure",
    "apply_local_unitary",
    "random_local_unitary",
]

POSITIVITY_TOL = 1e-10
MAX_TOTAL_DIM = 16


class StateError(ValueError):
    """Raised when a matrix fails the density-matrix checks."""


def canonical_subset(subset: Iterable[int], n: int) -> tuple[int, ...]:
    """Sorted tuple of 1-based subsystem labels; rejects empty or out-of-range input."""
    labels = tuple(sorted({int(m) for m in subset}))
    if not labels:
        raise ValueError("subset must be non-empty")
    if labels[0] < 1 or labels[-1] > n:
        raise ValueError(f"subset {labels} out of range for {n} subsystems")
    return labels


def all_subsets(n: int) -> list[tuple[int, ...]]:
    """All non-empty subsets of ``1..n``, by increasing size then lexicographically."""
    return [c for k in range(1, n + 1) for c in combinations(range(1, n + 1), k)]


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Complex square matrix together with its subsystem dimensions.

    Construction checks shapes only. Call :meth:`validate` (or use
    :func:`is_positive`) to test membership in the state space.
    """

    matrix: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        dims = tuple(int(d) for d in self.dims)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise StateError(f"density matrix must be square, got shape {m.shape}")
        if not dims or any(d < 2 for d in dims):
            raise StateError(f"invalid subsystem dimensions {dims}")
        if int(np.prod(dims)) != m.shape[0]:
            raise StateError(f"dims {dims} do not match matrix size {m.shape[0]}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_sites(self) -> int:
        return len(self.dims)

    @property
    def is_qubits(self) -> bool:
        return all(d == 2 for d in self.dims)

    def validate(self, tol: float = POSITIVITY_TOL) -> "DensityMatrix":
        """Return ``self`` if unit trace, Hermitian and positive within ``tol``."""
        m = self.matrix
        if abs(np.trace(m) - 1) > tol:
            raise StateError(f"trace {np.trace(m).real:.3g} != 1")
        if np.max(np.abs(m - m.conj().T)) > tol:
            raise StateError("matrix is not Hermitian")
        lo = np.linalg.eigvalsh(m)[0]
        if lo < -tol:
            raise StateError(f"matrix has negative eigenvalue {lo:.3g}")
        return self

    def __repr__(self) -> str:
        return f"DensityMatrix(dims={self.dims})"


def from_ket(psi: np.ndarray, dims: Sequence[int]) -> DensityMatrix:
    psi = np.asarray(psi, dtype=complex).ravel()
    psi = psi / np.linalg.norm(psi)
    return DensityMatrix(np.outer(psi, psi.conj()), tuple(dims))


def maximally_mixed(dims: Sequence[int]) -> DensityMatrix:
    d = int(np.prod(dims))
    return DensityMatrix(np.eye(d) / d, tuple(dims))


def bell_state() -> DensityMatrix:
    """``|phi+> = (|00> + |11>)/sqrt(2)``."""
    return from_ket(np.array([1, 0, 0, 1]), (2, 2))


def tensor_states(parts: Sequence[DensityMatrix]) -> DensityMatrix:
    if not parts:
        raise ValueError("need at least one state")
    m = np.ones((1, 1), dtype=complex)
    dims: tuple[int, ...] = ()
    for p in parts:
        m = np.kron(m, p.matrix)
        dims += p.dims
    return DensityMatrix(m, dims)


def partial_trace(rho: DensityMatrix, keep: Iterable[int]) -> DensityMatrix:
    """Reduced state on the subsystems in ``keep`` (1-based labels)."""
    keep = canonical_subset(keep, rho.n_sites)
    n = rho.n_sites
    if len(keep) == n:
        return rho
    t = rho.matrix.reshape(rho.dims * 2)
    # einsum subscripts: ket axes a.., bra axes A..; traced sites share a letter
    ket = [chr(ord("a") + i) for i in range(n)]
    bra = [ket[i] if (i + 1) not in keep else chr(ord("A") + i) for i in range(n)]
    out = [ket[m - 1] for m in keep] + [bra[m - 1] for m in keep]
    reduced = np.einsum("".join(ket + bra) + "->" + "".join(out), t)
    sub_dims = tuple(rho.dims[m - 1] for m in keep)
    d = int(np.prod(sub_dims))
    return DensityMatrix(reduced.reshape(d, d), sub_dims)


def purity(rho: DensityMatrix) -> float:
    """``tr(rho^2)``."""
    m = rho.matrix
    return float(np.real(np.einsum("ij,ji->", m, m)))


def spectrum(rho: DensityMatrix) -> np.ndarray:
    """Eigenvalues sorted in descending order."""
    m = rho.matrix
    if np.max(np.abs(m - m.conj().T)) > POSITIVITY_TOL:
        raise StateError("spectrum requires a Hermitian matrix")
    return np.linalg.eigvalsh(m)[::-1]


def is_positive(rho: DensityMatrix, tol: float = POSITIVITY_TOL) -> bool:
    return bool(spectrum(rho)[-1] >= -tol)


def _check_dims(dims: Sequence[int]) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if not dims or any(d < 2 for d in dims):
        raise ValueError(f"invalid subsystem dimensions {dims}")
    if np.prod(dims) > MAX_TOTAL_DIM:
        raise ValueError(f"total dimension {np.prod(dims)} exceeds {MAX_TOTAL_DIM}")
    return dims


def random_density(dims: Sequence[int], rng: np.random.Generator) -> DensityMatrix:
    """Hilbert-Schmidt random mixed state ``G G^dag / tr(G G^dag)``."""
    dims = _check_dims(dims)
    d = int(np.prod(dims))
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    m = g @ g.conj().T
    m = (m + m.conj().T) / 2
    return DensityMatrix(m / np.trace(m).real, dims)


def random_pure(dims: Sequence[int], rng: np.random.Generator) -> DensityMatrix:
    dims = _check_dims(dims)
    d = int(np.prod(dims))
    psi = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return from_ket(psi, dims)


def random_local_unitary(dims: Sequence[int], rng: np.random.Generator) -> list[np.ndarray]:
    """One Haar-random special unitary per subsystem (QR of a Ginibre matrix)."""
    out = []
    for d in dims:
        z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
        q, r = np.linalg.qr(z)
        q = q * (np.diag(r) / np.abs(np.diag(r)))
        q = q / np.linalg.det(q) ** (1.0 / d)
        out.append(q)
    return out


def apply_local_unitary(rho: DensityMatrix, unitaries: Sequence[np.ndarray]) -> DensityMatrix:
    """``U rho U^dag`` with ``U`` the Kronecker product of ``unitaries``."""
    if len(unitaries) != rho.n_sites:
        raise ValueError("need one unitary per subsystem")
    u = np.ones((1, 1), dtype=complex)
    for n, un in enumerate(unitaries):
        un = np.asarray(un, dtype=complex)
        if un.shape != (rho.dims[n], rho.dims[n]):
            raise ValueError(f"unitary {n + 1} has shape {un.shape}, expected dim {rho.dims[n]}")
        u = np.kron(u, un)
    return DensityMatrix(u @ rho.matrix @ u.conj().T, rho.dims)
