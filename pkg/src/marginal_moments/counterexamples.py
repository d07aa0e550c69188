"""Separable/entangled pairs with identical second-order marginal moments.

The base state ``3/4 |00><00| + 1/4 |11><11|`` has local vectors ``z/2`` and
correlation vector ``z (x) z``. Replacing the correlation vector by
``a x(x)y + b y(x)x + c z(x)z`` with ``a^2 + b^2 + c^2 = 1`` keeps every
marginal moment while changing the LU class, and for ``a, b != 0`` the new
state is entangled.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import TextIO

import numpy as np

from .bloch import state_from_bloch, tensor_from_marginals
from .entanglement import concurrences, eof_from_concurrence, negativities
from .operators import PAULI_X, PAULI_Y, PAULI_Z
from .states import POSITIVITY_TOL, DensityMatrix, StateError, from_ket

__all__ = [
    "CeParams",
    "ScanRecord",
    "SCAN_FIELDS",
    "base_state",
    "ce_positive",
    "boundary_distance",
    "build_ce",
    "em1_states",
    "em5_states",
    "scan_ce",
    "write_scan_csv",
]

NORM_TOL = 1e-10
SLACK = 1e-12
_PAULI_PAIRS = np.array([np.kron(p, q) for p in (PAULI_X, PAULI_Y, PAULI_Z) for q in (PAULI_X, PAULI_Y, PAULI_Z)])
SCAN_FIELDS = ("a", "b", "c", "positive", "concurrence", "eof", "negativity", "R12")


@dataclass(frozen=True)
class CeParams:
    """Coefficients of ``x(x)y``, ``y(x)x`` and ``z(x)z`` in the rotated correlation vector."""

    a: float
    b: float
    c: float

    def __post_init__(self):
        n2 = self.a**2 + self.b**2 + self.c**2
        if abs(n2 - 1) > NORM_TOL:
            raise ValueError(f"a^2 + b^2 + c^2 = {n2!r}, expected 1")

    @classmethod
    def normalized(cls, a: float, b: float, c: float) -> "CeParams":
        n = math.sqrt(a * a + b * b + c * c)
        return cls(a / n, b / n, c / n)

    def correlation_vector(self) -> np.ndarray:
        v = np.zeros(9)
        v[1], v[3], v[8] = self.a, self.b, self.c
        return v


def base_state() -> DensityMatrix:
    return DensityMatrix(np.diag([0.75, 0.0, 0.0, 0.25]), (2, 2))


def _margins(p: CeParams) -> tuple[float, float, float]:
    a, b, c = p.a, p.b, p.c
    return a - b - c + 1, b - a - c + 1, 2 * c * (c + 1) - 2 * a * b - 1


def ce_positive(p: CeParams) -> bool:
    """Closed-form positivity of :func:`build_ce` (boundary included)."""
    return all(m >= -SLACK for m in _margins(p))


def boundary_distance(p: CeParams) -> float:
    """Smallest absolute slack of the three positivity inequalities."""
    return min(abs(m) for m in _margins(p))


def build_ce(p: CeParams, unchecked: bool = False) -> DensityMatrix:
    """Counterexample state for ``p``.

    Raises :class:`StateError` if ``p`` lies outside the positivity region,
    unless ``unchecked`` is set.
    """
    if not unchecked and not ce_positive(p):
        raise StateError(f"parameters {p} give a non-positive matrix")
    half_z = np.array([0.0, 0.0, 0.5])
    bt = tensor_from_marginals((2, 2), {(1,): half_z, (2,): half_z, (1, 2): p.correlation_vector()})
    return state_from_bloch(bt)


def em1_states() -> tuple[DensityMatrix, DensityMatrix]:
    """Two four-qubit pure states with equal 4-body moment 9.

    The first is a Bell pair on (1, 2) times one on (3, 4); the second is
    ``(1/2) sum_{ab} |ab>|ab>``, i.e. Bell pairs on (1, 3) and (2, 4).
    """
    first = np.zeros(16)
    second = np.zeros(16)
    for x in (0, 1):
        for y in (0, 1):
            first[int(f"{x}{x}{y}{y}", 2)] = 0.5
            second[int(f"{x}{y}{x}{y}", 2)] = 0.5
    return from_ket(first, (2, 2, 2, 2)), from_ket(second, (2, 2, 2, 2))


def em5_states() -> tuple[DensityMatrix, DensityMatrix]:
    """Two-qubit states of purity 1/2 with different moment sets."""
    return (
        DensityMatrix(np.diag([0.5, 0.5, 0.0, 0.0]), (2, 2)),
        DensityMatrix(np.diag([1 / 6, 1 / 6, 2 / 3, 0.0]), (2, 2)),
    )


@dataclass(frozen=True)
class ScanRecord:
    a: float
    b: float
    c: float
    positive: bool
    spectral_positive: bool
    concurrence: float
    eof: float
    negativity: float
    R12: float


def _sphere_grid(step: float):
    n_theta = int(math.floor(math.pi / step + 1e-9))
    n_phi = int(math.ceil(2 * math.pi / step - 1e-9))
    for i in range(n_theta + 1):
        theta = i * step
        st, ct = math.sin(theta), math.cos(theta)
        for j in range(n_phi if st > 1e-12 else 1):
            phi = j * step
            yield st * math.cos(phi), st * math.sin(phi), ct


def scan_ce(grid_step: float) -> list[ScanRecord]:
    """Evaluate the counterexample family on a ``(theta, phi)`` grid of the unit sphere.

    ``(a, b, c) = (sin t cos p, sin t sin p, cos t)`` with ``t`` and ``p``
    stepped by ``grid_step`` radians. Entanglement measures are NaN at
    points where the matrix is not a state.
    """
    if not 0 < grid_step <= 0.2:
        raise ValueError("grid_step must lie in (0, 0.2]")
    params = [CeParams.normalized(*v) for v in _sphere_grid(grid_step)]
    mats = np.array([build_ce(p, unchecked=True).matrix for p in params])
    spectral = np.linalg.eigvalsh(mats)[:, 0] >= -POSITIVITY_TOL
    conc = concurrences(mats)
    neg = negativities(mats)
    # two-body moment straight from traces tr(rho s_i (x) s_j)
    corr = np.einsum("nab,kba->nk", mats, _PAULI_PAIRS).real
    r12 = np.sum(corr**2, axis=1)
    records = []
    for i, p in enumerate(params):
        if spectral[i]:
            ent = (float(conc[i]), eof_from_concurrence(conc[i]), float(neg[i]))
        else:
            ent = (math.nan, math.nan, math.nan)
        records.append(ScanRecord(p.a, p.b, p.c, ce_positive(p), bool(spectral[i]), *ent, float(r12[i])))
    return records


def write_scan_csv(records, out: TextIO | None = None) -> str:
    """Write records as CSV; floats use ``repr`` so they round-trip exactly."""
    buf = out if out is not None else io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SCAN_FIELDS)
    for r in records:
        w.writerow(
            [repr(float(r.a)), repr(float(r.b)), repr(float(r.c)), str(r.positive).lower()]
            + [repr(float(getattr(r, f))) for f in SCAN_FIELDS[4:]]
        )
    return buf.getvalue() if out is None else ""
