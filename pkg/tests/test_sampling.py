import math

import numpy as np
import pytest

from marginal_moments.bloch import bloch_from_state
from marginal_moments.counterexamples import base_state
from marginal_moments.moments import moment
from marginal_moments.sampling import (
    EstimatorConfig,
    NonQubitError,
    design_settings,
    estimate_moment,
    haar_direction,
    haar_su2,
    moment_from_design,
    outcome_probabilities,
    pair_estimate,
    setting_expectations,
)
from marginal_moments.states import (
    apply_local_unitary,
    bell_state,
    maximally_mixed,
    partial_trace,
    random_density,
    random_local_unitary,
)


def test_haar_directions_are_uniform():
    u = haar_direction(np.random.default_rng(3), 100_000)
    np.testing.assert_allclose(np.linalg.norm(u, axis=1), 1, atol=1e-12)
    assert np.all(np.abs(u.mean(axis=0)) < 0.02)
    # E[u_z^2] = 1/3 on the sphere
    assert abs(np.mean(u[:, 2] ** 2) - 1 / 3) < 0.02


def test_haar_direction_determinism():
    a = haar_direction(np.random.default_rng(11), 10)
    b = haar_direction(np.random.default_rng(11), 10)
    np.testing.assert_array_equal(a, b)
    assert haar_direction(np.random.default_rng(0)).shape == (3,)


def test_haar_su2_is_special_unitary():
    rng = np.random.default_rng(5)
    for _ in range(50):
        u = haar_su2(rng)
        np.testing.assert_allclose(u.conj().T @ u, np.eye(2), atol=1e-12)
        assert abs(np.linalg.det(u) - 1) < 1e-12


def test_haar_su2_rotates_axis_uniformly():
    rng = np.random.default_rng(8)
    z = np.array([[1, 0], [0, -1]])
    # Bloch vector of U|0><0|U^dag should be uniform on the sphere
    pts = []
    for _ in range(20_000):
        u = haar_su2(rng)
        m = u @ z @ u.conj().T
        pts.append([m[0, 1].real, -m[0, 1].imag, m[0, 0].real])
    pts = np.array(pts)
    assert np.all(np.abs(pts.mean(axis=0)) < 0.03)
    assert abs(np.mean(pts[:, 0] ** 2) - 1 / 3) < 0.02


def test_estimator_config_validation():
    with pytest.raises(ValueError):
        EstimatorConfig((1,), 0)
    with pytest.raises(ValueError):
        EstimatorConfig((1,), 10, order=3)
    with pytest.raises(ValueError):
        EstimatorConfig((1,), 10, shots=1)
    with pytest.raises(ValueError):
        EstimatorConfig((1,), 10, shots=-1)
    with pytest.raises(ValueError):
        EstimatorConfig((1,), 10, shots=10, order=4)
    with pytest.raises(ValueError):
        EstimatorConfig((1,), 10, seed=2**64)


def test_bell_estimate_infinite_shots():
    est = estimate_moment(bell_state(), EstimatorConfig((1, 2), 100_000, seed=1))
    assert abs(est.value - 3) <= 3 * est.stderr
    assert est.settings_used == 100_000 and est.shots_used == 0


def test_base_state_single_site_estimate():
    est = estimate_moment(base_state(), EstimatorConfig((1,), 100_000, seed=2))
    assert abs(est.value - 0.25) <= 3 * est.stderr


def test_maximally_mixed_estimate_is_zero():
    for subset in [(1,), (2,), (1, 2)]:
        est = estimate_moment(maximally_mixed((2, 2)), EstimatorConfig(subset, 500, seed=4))
        assert est.value == 0.0
        assert est.stderr == 0.0


def test_estimate_is_deterministic_and_schedule_independent():
    cfg = EstimatorConfig((1, 2), 20_000, shots=6, seed=99)
    rho = random_density((2, 2), np.random.default_rng(0))
    a = estimate_moment(rho, cfg)
    b = estimate_moment(rho, cfg)
    c = estimate_moment(rho, cfg, workers=4)
    assert a == b == c


def test_estimate_with_shots_converges():
    rho = random_density((2, 2), np.random.default_rng(12))
    exact = moment(bloch_from_state(rho), (1, 2))
    est = estimate_moment(rho, EstimatorConfig((1, 2), 50_000, shots=8, seed=5))
    assert abs(est.value - exact) <= 3 * est.stderr


def test_fourth_order_raw_moment():
    # E_u[(u . r)^4] = |r|^4 / 5 for a uniform direction
    est = estimate_moment(base_state(), EstimatorConfig((1,), 200_000, order=4, seed=6))
    assert abs(est.value - 0.5**4 / 5) <= 3 * est.stderr


def test_estimate_rejects_qudits():
    rho = random_density((2, 3), np.random.default_rng(0))
    with pytest.raises(NonQubitError):
        estimate_moment(rho, EstimatorConfig((2,), 10))
    # qubit part of a hybrid system is fine
    estimate_moment(rho, EstimatorConfig((1,), 10))


def test_outcome_probabilities_match_expectations():
    rng = np.random.default_rng(21)
    rho = random_density((2, 2, 2), rng)
    for subset in [(1,), (1, 3), (1, 2, 3)]:
        k = len(subset)
        axes = haar_direction(rng, (50, k))
        probs = outcome_probabilities(partial_trace(rho, subset), axes)
        np.testing.assert_allclose(probs.sum(axis=1), 1, atol=1e-12)
        signs = np.array([np.prod(s) for s in np.ndindex(*(2,) * k)])
        parity = np.where(np.array([sum(s) for s in np.ndindex(*(2,) * k)]) % 2 == 0, 1, -1)
        corr = bloch_from_state(rho).coeffs
        # exact expectation via the correlation tensor
        idx = tuple(slice(1, None) if (n + 1) in subset else 0 for n in range(3))
        exact = setting_expectations(corr[idx], axes)
        np.testing.assert_allclose(probs @ parity, exact, atol=1e-12)
        del signs


def test_single_qubit_outcome_probabilities():
    rho = base_state()
    axes = np.array([[[0.0, 0.0, 1.0]], [[1.0, 0.0, 0.0]]])
    probs = outcome_probabilities(partial_trace(rho, [1]), axes)
    np.testing.assert_allclose(probs, [[0.75, 0.25], [0.5, 0.5]], atol=1e-15)


def test_pair_estimate_matches_pair_sum():
    rng = np.random.default_rng(1)
    for k in (2, 3, 7):
        x = rng.choice([-1, 1], size=k)
        pairs = sum(x[i] * x[j] for i in range(k) for j in range(i + 1, k))
        assert pair_estimate((x == 1).sum(), k) == pytest.approx(2 * pairs / (k * (k - 1)))


def test_pair_estimator_is_unbiased():
    rng = np.random.default_rng(17)
    m = 0.6
    plus = rng.binomial(4, (1 + m) / 2, size=1000)
    est = pair_estimate(plus, 4)
    se = est.std(ddof=1) / math.sqrt(est.size)
    assert abs(est.mean() - m * m) <= 3 * se
    # the naive square of the sample mean is biased upward by Var/K
    naive = ((2 * plus - 4) / 4) ** 2
    assert naive.mean() - m * m > 3 * naive.std(ddof=1) / math.sqrt(naive.size)


def test_shot_pipeline_is_unbiased_at_four_shots():
    rho = base_state()
    rng = np.random.default_rng(23)
    vals = np.array([moment_from_design(rho, (1, 2), 4, rng).value for _ in range(1000)])
    se = vals.std(ddof=1) / math.sqrt(vals.size)
    assert abs(vals.mean() - 1.0) <= 3 * se


def test_design_settings():
    s = design_settings([1])
    np.testing.assert_array_equal(s[:, 0, :], np.eye(3))
    assert design_settings([1, 2]).shape == (9, 2, 3)
    with pytest.raises(NonQubitError):
        design_settings([1], dims=(3,))


def test_design_reproduces_single_site_moment():
    rho = random_density((2,), np.random.default_rng(2))
    r = bloch_from_state(rho).coeffs[1:]
    est = moment_from_design(rho, [1])
    assert est.value == pytest.approx(r @ r, abs=1e-14)
    assert est.stderr == 0.0 and est.settings_used == 3


def test_design_exact_values():
    assert moment_from_design(base_state(), (1, 2)).value == pytest.approx(1.0, abs=1e-12)
    assert moment_from_design(bell_state(), (1, 2)).value == pytest.approx(3.0, abs=1e-12)


def test_design_with_shots():
    est = moment_from_design(base_state(), (1,), 10_000, np.random.default_rng(31))
    assert abs(est.value - 0.25) <= 3 * est.stderr
    assert est.stderr > 0


def test_design_rejects_single_shot():
    with pytest.raises(ValueError):
        moment_from_design(base_state(), (1,), 1, np.random.default_rng(0))


def test_consistency_over_seeds():
    rho = random_density((2, 2), np.random.default_rng(44))
    exact = moment(bloch_from_state(rho), (1, 2))
    hits = 0
    for seed in range(100):
        est = estimate_moment(rho, EstimatorConfig((1, 2), 100_000, seed=seed))
        hits += abs(est.value - exact) <= 3 * est.stderr
    assert hits >= 99


def test_stderr_scaling():
    rho = bell_state()
    small = estimate_moment(rho, EstimatorConfig((1, 2), 1_000, seed=3))
    large = estimate_moment(rho, EstimatorConfig((1, 2), 100_000, seed=3))
    assert 7 <= small.stderr / large.stderr <= 14


def test_estimate_lu_invariance():
    rng = np.random.default_rng(50)
    rho = random_density((2, 2), rng)
    rotated = apply_local_unitary(rho, random_local_unitary(rho.dims, rng))
    a = estimate_moment(rho, EstimatorConfig((1, 2), 50_000, seed=1))
    b = estimate_moment(rotated, EstimatorConfig((1, 2), 50_000, seed=2))
    assert abs(a.value - b.value) <= 3 * math.hypot(a.stderr, b.stderr)
