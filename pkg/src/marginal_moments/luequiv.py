"""Rotations of Bloch data and local-unitary (LU) certificates for qubits.

A local unitary ``U_1 (x) ... (x) U_N`` acts on Bloch data as the product
rotation ``Q_1 (x) ... (x) Q_N`` on every marginal vector, with
``Q_n = su2_to_so3(U_n)``. Equal moment sets only guarantee *some*
rotation per subset, not a product one. The tools here certify
non-equivalence; they never claim equivalence for more than one qubit.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import reduce
from itertools import combinations
from typing import Mapping

import numpy as np

from .bloch import BlochTensor, bloch_from_state, marginal_vector
from .moments import moment_set, moment_sets_equal
from .operators import PAULI_X, PAULI_Y, PAULI_Z
from .sampling import haar_su2
from .states import DensityMatrix, all_subsets, spectrum

__all__ = [
    "Verdict",
    "LuVerdict",
    "is_rotation",
    "is_unitary",
    "su2_to_so3",
    "rotation_between",
    "check_blockwise_rotation",
    "special_procrustes",
    "mirsky_bound",
    "product_rotation_residual",
    "single_qubit_lu_equivalent",
    "lu_verdict",
]

_PAULIS = np.array([PAULI_X, PAULI_Y, PAULI_Z])
ROTATION_TOL = 1e-10
BLOCKWISE_TOL = 1e-9
MIRSKY_THRESHOLD = 1e-6


class Verdict(str, Enum):
    EQUIVALENT_SINGLE_QUBIT = "equivalent-single-qubit"
    NOT_EQUIVALENT = "not-equivalent"
    CONSISTENT_BUT_UNPROVEN = "consistent-but-unproven"


@dataclass(frozen=True)
class LuVerdict:
    moments_equal: bool
    invariants_equal: bool
    product_residual: float
    mirsky_bound: float
    verdict: Verdict


def is_rotation(q: np.ndarray, tol: float = ROTATION_TOL) -> bool:
    q = np.asarray(q)
    if q.ndim != 2 or q.shape[0] != q.shape[1] or np.iscomplexobj(q) and np.any(q.imag):
        return False
    q = np.real(q)
    return bool(
        np.allclose(q.T @ q, np.eye(q.shape[0]), atol=tol, rtol=0)
        and abs(np.linalg.det(q) - 1) <= tol
    )


def is_unitary(u: np.ndarray, tol: float = ROTATION_TOL) -> bool:
    u = np.asarray(u)
    return u.ndim == 2 and u.shape[0] == u.shape[1] and np.allclose(
        u.conj().T @ u, np.eye(u.shape[0]), atol=tol, rtol=0
    )


def su2_to_so3(u: np.ndarray) -> np.ndarray:
    """Rotation ``Q`` with ``U sigma_j U^dag = sum_i Q[i, j] sigma_i``.

    ``Q[i, j] = tr(sigma_i U sigma_j U^dag) / 2``. The map is two-to-one:
    ``U`` and ``-U`` give the same rotation. A global phase is ignored.
    """
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2) or not is_unitary(u):
        raise ValueError("su2_to_so3 needs a 2x2 unitary")
    conj = np.einsum("ab,jbc,dc->jad", u, _PAULIS, u.conj())
    return np.einsum("iab,jba->ij", _PAULIS, conj).real / 2


def _householder(n: np.ndarray) -> np.ndarray:
    n = n / np.linalg.norm(n)
    return np.eye(n.size) - 2 * np.outer(n, n)


def rotation_between(v: np.ndarray, w: np.ndarray, tol: float = ROTATION_TOL) -> np.ndarray:
    """A special orthogonal ``Q`` with ``Q v = w``.

    Built from two reflections: one exchanging ``v`` and ``w``, and one
    fixing ``w`` to restore ``det Q = +1``.
    """
    v = np.asarray(v, dtype=float).ravel()
    w = np.asarray(w, dtype=float).ravel()
    if v.shape != w.shape:
        raise ValueError("vectors must have the same length")
    nv, nw = np.linalg.norm(v), np.linalg.norm(w)
    if nv <= tol or nw <= tol:
        raise ValueError("vectors must be nonzero")
    if abs(nv - nw) > tol:
        raise ValueError(f"norm mismatch: {nv} vs {nw}")
    k = v.size
    if np.linalg.norm(v - w) <= tol:
        return np.eye(k)
    if k == 1:
        raise ValueError("no rotation in SO(1) maps v to -v")
    h1 = _householder(v - w)
    # reflection along a direction orthogonal to w
    e = np.eye(k)[np.argmin(np.abs(w))]
    p = e - (e @ w) / (w @ w) * w
    return _householder(p) @ h1


def check_blockwise_rotation(
    bt_a: BlochTensor,
    bt_b: BlochTensor,
    rotations: Mapping[int, np.ndarray],
    tol: float = BLOCKWISE_TOL,
) -> bool:
    """True iff every marginal vector of ``bt_b`` equals ``(x)_m Q_m`` applied to ``bt_a``'s."""
    if bt_a.dims != bt_b.dims:
        raise ValueError(f"dimension mismatch: {bt_a.dims} vs {bt_b.dims}")
    if any(d != 2 for d in bt_a.dims):
        raise ValueError("blockwise rotation check is implemented for qubits")
    n = bt_a.n_sites
    if set(rotations) != set(range(1, n + 1)):
        raise ValueError("need one rotation per subsystem, keyed 1..N")
    for subset in all_subsets(n):
        q = reduce(np.kron, [np.asarray(rotations[m], dtype=float) for m in subset])
        ra = marginal_vector(bt_a, subset).values
        rb = marginal_vector(bt_b, subset).values
        if np.max(np.abs(rb - q @ ra)) > tol:
            return False
    return True


def special_procrustes(target: np.ndarray, source: np.ndarray) -> np.ndarray:
    """``argmin_Q ||target - Q source||_F`` over SO(k)."""
    u, _, vt = np.linalg.svd(target @ source.T)
    d = np.ones(u.shape[0])
    d[-1] = np.sign(np.linalg.det(u @ vt)) or 1.0
    return (u * d) @ vt


def mirsky_bound(t_a: np.ndarray, t_b: np.ndarray) -> float:
    """Lower bound ``||sigma(T_a) - sigma(T_b)||_2`` on ``||T_b - Q1 T_a Q2^T||_F``."""
    sa = np.linalg.svd(t_a, compute_uv=False)
    sb = np.linalg.svd(t_b, compute_uv=False)
    return float(np.linalg.norm(sa - sb))


def _svd_start(t_a, t_b):
    ua, _, vta = np.linalg.svd(t_a)
    ub, _, vtb = np.linalg.svd(t_b)
    q1 = ub @ ua.T
    q2 = vtb.T @ vta
    # put any sign defect on the smallest singular direction of both sides
    fix = np.diag([1.0, 1.0, -1.0])
    if np.linalg.det(q1) < 0:
        q1 = ub @ fix @ ua.T
    if np.linalg.det(q2) < 0:
        q2 = vtb.T @ fix @ vta
    return q1, q2


def _refine(t_a, t_b, q1, q2, iters):
    best = (float(np.linalg.norm(t_b - q1 @ t_a @ q2.T)), q1, q2)
    for _ in range(iters):
        q1 = special_procrustes(t_b, t_a @ q2.T)
        q2 = special_procrustes(t_b.T, (q1 @ t_a).T)
        res = float(np.linalg.norm(t_b - q1 @ t_a @ q2.T))
        improved = best[0] - res
        if res < best[0]:
            best = (res, q1, q2)
        if improved < 1e-15:
            break
    return best


def product_rotation_residual(
    t_a: np.ndarray,
    t_b: np.ndarray,
    restarts: int = 32,
    rng: np.random.Generator | None = None,
    iters: int = 200,
) -> tuple[float, np.ndarray, np.ndarray]:
    """Smallest ``||T_b - Q1 T_a Q2^T||_F`` found over ``Q1, Q2`` in SO(3).

    Starts from the determinant-corrected SVD alignment plus ``restarts``
    Haar-random pairs, each refined by alternating special-orthogonal
    Procrustes steps. The returned value bounds the true minimum from above;
    :func:`mirsky_bound` bounds it from below.
    """
    t_a = np.asarray(t_a, dtype=float)
    t_b = np.asarray(t_b, dtype=float)
    if t_a.shape != (3, 3) or t_b.shape != (3, 3):
        raise ValueError("expected 3x3 correlation matrices")
    if rng is None:
        rng = np.random.default_rng(0)
    starts = [_svd_start(t_a, t_b)]
    starts += [(su2_to_so3(haar_su2(rng)), su2_to_so3(haar_su2(rng))) for _ in range(restarts)]
    best = None
    for q1, q2 in starts:
        cand = _refine(t_a, t_b, q1, q2, iters)
        if best is None or cand[0] < best[0]:
            best = cand
    return best


def single_qubit_lu_equivalent(rho_a: DensityMatrix, rho_b: DensityMatrix, tol: float = 1e-10) -> bool:
    """Single-qubit states are unitarily equivalent iff their spectra agree."""
    for r in (rho_a, rho_b):
        if r.dims != (2,):
            raise ValueError(f"expected a single qubit, got dims {r.dims}")
    return bool(np.max(np.abs(spectrum(rho_a) - spectrum(rho_b))) <= tol)


def _pair_invariants(bt: BlochTensor, pair):
    t = marginal_vector(bt, pair).values.reshape(3, 3)
    return t, np.linalg.svd(t, compute_uv=False), np.linalg.det(t)


def _sign(x: float, tol: float) -> int:
    return 0 if abs(x) <= tol else (1 if x > 0 else -1)


def lu_verdict(
    rho_a: DensityMatrix,
    rho_b: DensityMatrix,
    restarts: int = 32,
    rng: np.random.Generator | None = None,
    tol: float = 1e-10,
) -> LuVerdict:
    """Decide what second-order data can say about LU equivalence of two qubit states.

    Unequal moment sets, unequal LU invariants, or a positive Mirsky bound
    on some two-qubit correlation block each prove non-equivalence. A single
    qubit is decided completely by its spectrum. Otherwise the result is
    ``consistent-but-unproven``.

    For three or more qubits the invariants and residuals are evaluated on
    every pair of qubits and the largest residual and bound are reported.
    """
    if rho_a.dims != rho_b.dims:
        raise ValueError(f"dimension mismatch: {rho_a.dims} vs {rho_b.dims}")
    if not rho_a.is_qubits:
        raise ValueError("lu_verdict is implemented for qubit systems")
    if rng is None:
        rng = np.random.default_rng(0)
    bt_a, bt_b = bloch_from_state(rho_a), bloch_from_state(rho_b)
    moments_equal = moment_sets_equal(moment_set(bt_a), moment_set(bt_b), tol)

    if rho_a.n_sites == 1:
        same = single_qubit_lu_equivalent(rho_a, rho_b, tol)
        va = marginal_vector(bt_a, (1,)).values
        vb = marginal_vector(bt_b, (1,)).values
        residual = abs(np.linalg.norm(va) - np.linalg.norm(vb))
        verdict = Verdict.EQUIVALENT_SINGLE_QUBIT if same else Verdict.NOT_EQUIVALENT
        return LuVerdict(moments_equal, same, float(residual), float(residual), verdict)

    invariants_equal = True
    for m in range(1, rho_a.n_sites + 1):
        na = np.linalg.norm(marginal_vector(bt_a, (m,)).values)
        nb = np.linalg.norm(marginal_vector(bt_b, (m,)).values)
        invariants_equal &= bool(abs(na - nb) <= tol)
    residual = 0.0
    bound = 0.0
    for pair in combinations(range(1, rho_a.n_sites + 1), 2):
        ta, sva, da = _pair_invariants(bt_a, pair)
        tb, svb, db = _pair_invariants(bt_b, pair)
        invariants_equal &= bool(np.max(np.abs(sva - svb)) <= tol)
        invariants_equal &= _sign(da, tol) == _sign(db, tol)
        bound = max(bound, mirsky_bound(ta, tb))
        residual = max(residual, product_rotation_residual(ta, tb, restarts, rng)[0])

    if not moments_equal or not invariants_equal or bound > MIRSKY_THRESHOLD:
        verdict = Verdict.NOT_EQUIVALENT
    else:
        verdict = Verdict.CONSISTENT_BUT_UNPROVEN
    return LuVerdict(moments_equal, bool(invariants_equal), residual, bound, verdict)
