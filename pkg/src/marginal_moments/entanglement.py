"""Two-qubit entanglement measures."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .operators import PAULI_Y
from .states import DensityMatrix

__all__ = [
    "EntanglementReport",
    "concurrence",
    "concurrences",
    "eof_from_concurrence",
    "entanglement_of_formation",
    "partial_transpose",
    "negativity",
    "negativities",
    "is_ppt",
    "entanglement_report",
]

PPT_TOL = 1e-10
_YY = np.kron(PAULI_Y, PAULI_Y)


@dataclass(frozen=True)
class EntanglementReport:
    concurrence: float
    eof: float
    negativity: float
    ppt: bool


def _two_qubits(rho: DensityMatrix) -> np.ndarray:
    if rho.dims != (2, 2):
        raise ValueError(f"expected a two-qubit state, got dims {rho.dims}")
    return rho.matrix


def concurrences(mats: np.ndarray) -> np.ndarray:
    """Vectorized :func:`concurrence` over a stack of 4x4 matrices."""
    mats = np.asarray(mats, dtype=complex)
    r = mats @ _YY @ mats.conj() @ _YY
    # eigenvalues are real and non-negative up to rounding
    s = np.sqrt(np.sort(np.abs(np.linalg.eigvals(r).real), axis=-1)[..., ::-1])
    return np.maximum(0.0, s[..., 0] - s[..., 1] - s[..., 2] - s[..., 3])


def concurrence(rho: DensityMatrix) -> float:
    """Wootters concurrence ``max(0, s1 - s2 - s3 - s4)``.

    ``s_i`` are the square roots, in decreasing order, of the eigenvalues of
    ``rho (Y x Y) rho^* (Y x Y)``.
    """
    return float(concurrences(_two_qubits(rho)))


def eof_from_concurrence(c: float) -> float:
    """Entanglement of formation in bits, ``h((1 + sqrt(1 - C^2)) / 2)``."""
    c = min(max(float(c), 0.0), 1.0)
    x = (1 + np.sqrt(1 - c * c)) / 2
    if x >= 1.0:
        return 0.0
    if x <= 0.5:
        return 1.0
    return float(-x * np.log2(x) - (1 - x) * np.log2(1 - x))


def entanglement_of_formation(rho: DensityMatrix) -> float:
    return eof_from_concurrence(concurrence(rho))


def partial_transpose(rho: DensityMatrix, cut: int = 2) -> np.ndarray:
    """Transpose subsystem ``cut`` (1 or 2) of a bipartite state."""
    if rho.n_sites != 2:
        raise ValueError("partial transpose needs a bipartite state")
    if cut not in (1, 2):
        raise ValueError(f"cut must be 1 or 2, got {cut}")
    d1, d2 = rho.dims
    t = rho.matrix.reshape(d1, d2, d1, d2)
    t = t.transpose(2, 1, 0, 3) if cut == 1 else t.transpose(0, 3, 2, 1)
    return t.reshape(d1 * d2, d1 * d2)


def negativities(mats: np.ndarray, cut: int = 2) -> np.ndarray:
    """Vectorized two-qubit :func:`negativity` over a stack of 4x4 matrices."""
    if cut not in (1, 2):
        raise ValueError(f"cut must be 1 or 2, got {cut}")
    mats = np.asarray(mats, dtype=complex)
    t = mats.reshape(mats.shape[:-2] + (2, 2, 2, 2))
    perm = (2, 1, 0, 3) if cut == 1 else (0, 3, 2, 1)
    lead = tuple(range(t.ndim - 4))
    t = t.transpose(lead + tuple(len(lead) + p for p in perm)).reshape(mats.shape)
    ev = np.linalg.eigvalsh(t)
    return np.where(ev < 0, -ev, 0.0).sum(axis=-1)


def negativity(rho: DensityMatrix, cut: int = 2) -> float:
    """Sum of the absolute values of the negative eigenvalues of the partial transpose."""
    return float(negativities(_two_qubits(rho), cut))


def is_ppt(rho: DensityMatrix, cut: int = 2, tol: float = PPT_TOL) -> bool:
    return negativity(rho, cut) <= tol


def entanglement_report(rho: DensityMatrix) -> EntanglementReport:
    c = concurrence(rho)
    n = negativity(rho)
    return EntanglementReport(c, eof_from_concurrence(c), n, n <= PPT_TOL)
