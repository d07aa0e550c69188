import math

import numpy as np
import pytest

from marginal_moments.counterexamples import base_state, build_ce
from marginal_moments.entanglement import (
    concurrence,
    concurrences,
    entanglement_of_formation,
    entanglement_report,
    eof_from_concurrence,
    is_ppt,
    negativity,
    partial_transpose,
)
from marginal_moments.states import (
    DensityMatrix,
    apply_local_unitary,
    bell_state,
    from_ket,
    maximally_mixed,
    random_density,
    random_local_unitary,
    tensor_states,
)


def werner(p):
    """p |phi+><phi+| + (1 - p) I/4; entangled iff p > 1/3."""
    return DensityMatrix(p * bell_state().matrix + (1 - p) * np.eye(4) / 4, (2, 2))


def test_bell_state_measures():
    rep = entanglement_report(bell_state())
    assert rep.concurrence == pytest.approx(1.0, abs=1e-12)
    assert rep.eof == pytest.approx(1.0, abs=1e-12)
    assert rep.negativity == pytest.approx(0.5, abs=1e-12)
    assert not rep.ppt


def test_base_state_is_separable():
    rep = entanglement_report(base_state())
    assert rep.concurrence == 0.0 and rep.eof == 0.0
    assert rep.negativity == 0.0 and rep.ppt


@pytest.mark.parametrize("p", [0.0, 0.2, 1 / 3, 0.5, 0.8, 1.0])
def test_werner_concurrence(p):
    # textbook closed form C = max(0, (3p - 1)/2), N = max(0, (3p - 1)/4)
    rho = werner(p)
    assert concurrence(rho) == pytest.approx(max(0.0, (3 * p - 1) / 2), abs=1e-12)
    assert negativity(rho) == pytest.approx(max(0.0, (3 * p - 1) / 4), abs=1e-12)


def test_pure_state_concurrence():
    # |psi> = cos t |00> + sin t |11> has C = |sin 2t|
    for t in np.linspace(0, math.pi / 2, 7):
        psi = np.array([math.cos(t), 0, 0, math.sin(t)])
        assert concurrence(from_ket(psi, (2, 2))) == pytest.approx(abs(math.sin(2 * t)), abs=1e-7)


def test_eof_formula_points():
    assert eof_from_concurrence(0.0) == 0.0
    assert eof_from_concurrence(1.0) == 1.0
    c = 0.5
    x = (1 + math.sqrt(1 - c * c)) / 2
    assert eof_from_concurrence(c) == pytest.approx(-x * math.log2(x) - (1 - x) * math.log2(1 - x))
    cs = np.linspace(0, 1, 50)
    vals = [eof_from_concurrence(c) for c in cs]
    assert np.all(np.diff(vals) >= 0)


def test_symmetric_point_entanglement(sym_params):
    rho = build_ce(sym_params)
    assert abs(entanglement_of_formation(rho) - 0.22) <= 0.005
    assert negativity(rho) > 0
    assert not is_ppt(rho)


def test_partial_transpose_both_cuts(rng):
    rho = random_density((2, 3), rng)
    t1 = partial_transpose(rho, 1)
    t2 = partial_transpose(rho, 2)
    # the two partial transposes are full transposes of each other
    np.testing.assert_allclose(t1, t2.T, atol=1e-14)
    np.testing.assert_allclose(partial_transpose(DensityMatrix(t2, (2, 3)), 2), rho.matrix)
    with pytest.raises(ValueError):
        partial_transpose(rho, 3)
    with pytest.raises(ValueError):
        partial_transpose(random_density((2, 2, 2), rng))


def test_negativity_same_for_either_cut(rng):
    rho = random_density((2, 2), rng)
    assert negativity(rho, 1) == pytest.approx(negativity(rho, 2), abs=1e-12)


def test_measures_are_lu_invariant(rng):
    for _ in range(20):
        rho = random_density((2, 2), rng)
        rotated = apply_local_unitary(rho, random_local_unitary((2, 2), rng))
        assert concurrence(rotated) == pytest.approx(concurrence(rho), abs=1e-10)
        assert negativity(rotated) == pytest.approx(negativity(rho), abs=1e-10)


def test_concurrence_and_ppt_agree_for_two_qubits(rng):
    for _ in range(200):
        rho = random_density((2, 2), rng)
        assert (concurrence(rho) > 1e-8) == (negativity(rho) > 1e-10)


def test_ranges(rng):
    for _ in range(50):
        rep = entanglement_report(random_density((2, 2), rng))
        assert 0 <= rep.concurrence <= 1
        assert 0 <= rep.eof <= 1
        assert 0 <= rep.negativity <= 0.5


def test_products_are_separable(rng):
    rho = tensor_states([random_density((2,), rng), random_density((2,), rng)])
    assert concurrence(rho) < 1e-8
    assert is_ppt(rho)


def test_vectorized_matches_scalar(rng):
    states = [random_density((2, 2), rng) for _ in range(5)]
    stack = np.array([s.matrix for s in states])
    np.testing.assert_allclose(concurrences(stack), [concurrence(s) for s in states], atol=1e-14)


def test_wrong_dims_rejected():
    for rho in (maximally_mixed((2, 3)), maximally_mixed((2,)), maximally_mixed((2, 2, 2))):
        with pytest.raises(ValueError):
            concurrence(rho)
