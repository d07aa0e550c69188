"""Simulated randomized measurements on qubits.

Each setting draws one Haar-random axis ``u_n`` per measured qubit and
measures the product observable ``(x)_n u_n . sigma``. For the second
moment the Haar average ``3**k * E[<A>^2]`` equals the exact marginal
moment of the ``k`` measured qubits, since ``E_u[(u . r)^2] = |r|^2 / 3``.

Settings are generated in fixed-size batches, each drawing from its own
substream spawned from ``(seed, batch index)``, so results do not depend
on how batches are scheduled.
"""
from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .bloch import bloch_from_state, marginal_vector
from .states import DensityMatrix, canonical_subset, partial_trace

__all__ = [
    "EstimatorConfig",
    "MomentEstimate",
    "NonQubitError",
    "haar_direction",
    "haar_su2",
    "setting_expectations",
    "outcome_probabilities",
    "pair_estimate",
    "estimate_moment",
    "design_settings",
    "moment_from_design",
]

BATCH_SIZE = 4096

_AXES = np.eye(3)


class NonQubitError(ValueError):
    """Monte Carlo normalization is only defined here for qubit subsystems."""


@dataclass(frozen=True)
class EstimatorConfig:
    """Parameters of a Monte Carlo moment estimate.

    ``shots = 0`` selects infinite-shot mode, where each setting contributes
    its exact expectation value.
    """

    subset: tuple[int, ...]
    settings: int
    shots: int = 0
    order: int = 2
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "subset", tuple(sorted(int(m) for m in self.subset)))
        if self.settings < 1:
            raise ValueError("settings must be >= 1")
        if self.shots < 0:
            raise ValueError("shots must be >= 0")
        if self.order < 2 or self.order % 2:
            raise ValueError(f"moment order must be a positive even integer, got {self.order}")
        if self.order > 2 and self.shots:
            raise ValueError("orders above 2 are only supported in infinite-shot mode")
        if self.order == 2 and self.shots == 1:
            raise ValueError("the unbiased pair estimator needs at least 2 shots per setting")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class MomentEstimate:
    value: float
    stderr: float
    settings_used: int
    shots_used: int


def haar_direction(rng: np.random.Generator, size: int | tuple | None = None) -> np.ndarray:
    """Uniform unit vector(s) on the 2-sphere; trailing axis has length 3."""
    shape = (3,) if size is None else tuple(np.atleast_1d(size)) + (3,)
    v = rng.standard_normal(shape)
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


def haar_su2(rng: np.random.Generator) -> np.ndarray:
    """Haar-random element of SU(2) from a uniform unit quaternion."""
    q = rng.standard_normal(4)
    a, b, c, d = q / np.linalg.norm(q)
    return np.array([[a + 1j * b, c + 1j * d], [-c + 1j * d, a - 1j * b]])


def _check_qubits(rho: DensityMatrix, subset) -> tuple[int, ...]:
    subset = canonical_subset(subset, rho.n_sites)
    bad = [m for m in subset if rho.dims[m - 1] != 2]
    if bad:
        raise NonQubitError(f"subsystems {bad} are not qubits")
    return subset


def _correlation_tensor(rho: DensityMatrix, subset) -> np.ndarray:
    """Marginal vector of ``subset`` reshaped to ``(3,) * k``."""
    mv = marginal_vector(bloch_from_state(rho), subset)
    return mv.values.reshape((3,) * len(subset))


def setting_expectations(corr: np.ndarray, axes: np.ndarray) -> np.ndarray:
    """Exact ``<(x)_n u_n . sigma>`` for a batch of settings.

    ``corr`` has shape ``(3,) * k`` and ``axes`` shape ``(B, k, 3)``.
    """
    x = np.broadcast_to(corr, (axes.shape[0],) + corr.shape)
    for n in range(axes.shape[1]):
        x = np.einsum("bi...,bi->b...", x, axes[:, n, :])
    return x


def outcome_probabilities(reduced: DensityMatrix, axes: np.ndarray) -> np.ndarray:
    """Joint +-1 outcome distribution for each setting.

    Returns shape ``(B, 2**k)``, outcomes in lexicographic order with
    index bit 0 meaning ``+1``.
    """
    b, k, _ = axes.shape
    sigma = np.array([[[0, 1], [1, 0]], [[0, -1j], [1j, 0]], [[1, 0], [0, -1]]])
    obs = np.einsum("zki,ipq->zkpq", axes, sigma)
    eye = np.eye(2)
    # projectors[b, k, s] = (I + s u.sigma) / 2 with s = +1, -1
    proj = np.stack([(eye + obs) / 2, (eye - obs) / 2], axis=2)
    letters = "cdefghijklmnopqrstuvwxy"
    ket, bra, out = letters[:k], letters[k : 2 * k], letters[2 * k : 3 * k]
    spec = ket + bra + "," + ",".join("z" + s + b_ + a for s, b_, a in zip(out, bra, ket)) + "->z" + out
    t = reduced.matrix.reshape((2,) * (2 * k))
    p = np.einsum(spec, t, *[proj[:, n] for n in range(k)], optimize=True).real.reshape(b, -1)
    p = np.clip(p, 0.0, None)
    return p / p.sum(axis=1, keepdims=True)


def _parities(k: int) -> np.ndarray:
    signs = np.array(list(itertools.product((1, -1), repeat=k)))
    return signs.prod(axis=1)


def pair_estimate(plus: np.ndarray, shots: int) -> np.ndarray:
    """Unbiased estimate of ``<A>^2`` from ``plus`` outcomes +1 out of ``shots``.

    Equals ``2 / (K (K - 1)) sum_{i<j} x_i x_j`` for the +-1 record ``x``.
    """
    s = 2 * np.asarray(plus, dtype=float) - shots
    return (s * s - shots) / (shots * (shots - 1))


def _pair_estimate_variance(m2: np.ndarray, shots: int) -> np.ndarray:
    # variance of the degree-2 U-statistic with kernel x_i x_j, <x> = m
    k = shots
    return 2.0 / (k * (k - 1)) * (2 * (k - 2) * m2 * (1 - m2) + 1 - m2 * m2)


def _squared_expectations(reduced, corr, axes, shots, rng):
    exact = setting_expectations(corr, axes)
    if shots == 0:
        return exact**2
    probs = outcome_probabilities(reduced, axes)
    counts = rng.multinomial(shots, probs)
    plus = counts[:, _parities(axes.shape[1]) == 1].sum(axis=1)
    return pair_estimate(plus, shots)


def _batch_contributions(args):
    reduced, corr, cfg, k, batch, count = args
    rng = np.random.default_rng(np.random.SeedSequence(cfg.seed, spawn_key=(batch,)))
    axes = haar_direction(rng, (count, k))
    if cfg.order == 2:
        return 3.0**k * _squared_expectations(reduced, corr, axes, cfg.shots, rng)
    return setting_expectations(corr, axes) ** cfg.order


def estimate_moment(rho: DensityMatrix, cfg: EstimatorConfig, workers: int = 1) -> MomentEstimate:
    """Monte Carlo estimate of the marginal moment of ``cfg.subset``.

    For order 2 the result is normalized so that its expectation equals the
    exact moment; higher even orders report the raw average ``E[<A>^t]``.

    Parameters
    ----------
    rho : DensityMatrix
    cfg : EstimatorConfig
    workers : int
        Threads used to evaluate batches. The result is identical for any value.
    """
    subset = _check_qubits(rho, cfg.subset)
    k = len(subset)
    reduced = partial_trace(rho, subset)
    corr = _correlation_tensor(rho, subset)
    n_batches = math.ceil(cfg.settings / BATCH_SIZE)
    jobs = [
        (reduced, corr, cfg, k, i, min(BATCH_SIZE, cfg.settings - i * BATCH_SIZE))
        for i in range(n_batches)
    ]
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(_batch_contributions, jobs))
    else:
        parts = [_batch_contributions(j) for j in jobs]
    contrib = np.concatenate(parts)
    n = contrib.size
    stderr = float(np.std(contrib, ddof=1) / math.sqrt(n)) if n > 1 else math.inf
    return MomentEstimate(float(np.mean(contrib)), stderr, n, cfg.shots)


def design_settings(subset: Iterable[int], dims=None) -> np.ndarray:
    """All ``3**k`` products of coordinate axes, shape ``(3**k, k, 3)``.

    The six axis directions +-x, +-y, +-z form a spherical 2-design; opposite
    directions give the same squared expectation, so three axes suffice.
    """
    subset = tuple(sorted(int(m) for m in subset))
    if not subset:
        raise ValueError("subset must be non-empty")
    if dims is not None:
        bad = [m for m in subset if dims[m - 1] != 2]
        if bad:
            raise NonQubitError(f"subsystems {bad} are not qubits")
    k = len(subset)
    return np.array([[_AXES[i] for i in combo] for combo in itertools.product(range(3), repeat=k)])


def moment_from_design(
    rho: DensityMatrix,
    subset: Iterable[int],
    shots: int = 0,
    rng: np.random.Generator | None = None,
) -> MomentEstimate:
    """Second moment from the fixed axis design.

    With ``shots = 0`` this is exact to rounding. With finite shots the
    reported standard error is the shot-noise error of the pair estimators,
    since the settings themselves are not random.
    """
    subset = _check_qubits(rho, subset)
    if shots < 0 or shots == 1:
        raise ValueError("shots must be 0 (exact) or >= 2")
    k = len(subset)
    axes = design_settings(subset, rho.dims)
    reduced = partial_trace(rho, subset)
    corr = _correlation_tensor(rho, subset)
    if shots and rng is None:
        rng = np.random.default_rng()
    sq = _squared_expectations(reduced, corr, axes, shots, rng)
    scale = 3.0**k
    value = float(scale * np.mean(sq))
    if shots == 0:
        stderr = 0.0
    else:
        var = _pair_estimate_variance(np.clip(sq, 0.0, 1.0), shots)
        stderr = float(scale * math.sqrt(var.sum()) / axes.shape[0])
    return MomentEstimate(value, stderr, axes.shape[0], shots)
