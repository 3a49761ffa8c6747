import math

import numpy as np
import pytest

from correlations import CorrelationTriple, correlation_triple
from errors import ValidationError
from state import (TwoQubitState, build_x_state, closed_form_eigenvalues, correlation_tensor,
                   spectrum, von_neumann_entropy, x_state_elements)

PLATEAU_EIGENVALUES = sorted([
    (1 - 4 / math.pi ** 2) / 4,
    (1 - 4 / math.pi ** 2) / 4,
    (1 + 4 / math.pi ** 2 + 4 / math.pi) / 4,
    (1 + 4 / math.pi ** 2 - 4 / math.pi) / 4,
])


def test_elements_of_plateau_state(plateau_triple):
    u, omega, y = x_state_elements(plateau_triple)
    assert u == pytest.approx((1 - 4 / math.pi ** 2) / 4)
    assert omega == pytest.approx((1 + 4 / math.pi ** 2) / 4)
    assert y == pytest.approx(1 / math.pi)


def test_build_x_state_structure(plateau_state):
    M = plateau_state.matrix
    assert np.trace(M).real == pytest.approx(1.0, abs=1e-14)
    np.testing.assert_allclose(M, M.conj().T)
    assert M[0, 3] == 0 and M[0, 1] == 0
    assert plateau_state.provenance is not None


def test_closed_form_matches_numeric_spectrum(plateau_triple, plateau_state):
    np.testing.assert_allclose(closed_form_eigenvalues(plateau_triple), PLATEAU_EIGENVALUES, atol=1e-12)
    np.testing.assert_allclose(spectrum(plateau_state).probabilities, PLATEAU_EIGENVALUES, atol=1e-12)


def test_spectrum_of_maximally_mixed():
    s = TwoQubitState.from_matrix(np.eye(4) / 4)
    np.testing.assert_allclose(spectrum(s).probabilities, [0.25] * 4)
    assert von_neumann_entropy(s) == pytest.approx(2.0, abs=1e-12)


def test_entropy_of_pure_state_is_zero():
    bell = np.array([0, 1, -1, 0]) / math.sqrt(2)
    s = TwoQubitState.from_matrix(np.outer(bell, bell))
    assert von_neumann_entropy(s) == pytest.approx(0.0, abs=1e-12)


def test_entropy_of_plateau_state(plateau_state):
    p = np.array(PLATEAU_EIGENVALUES)
    expected = -float(np.sum(p * np.log2(p)))
    assert von_neumann_entropy(plateau_state) == pytest.approx(expected, abs=1e-12)
    assert von_neumann_entropy(plateau_state) == pytest.approx(1.3675, abs=1e-3)


def test_entropy_bounds(random_states):
    for s in random_states:
        assert 0.0 <= von_neumann_entropy(s) <= 2.0 + 1e-12


def test_correlation_tensor_recovers_triple():
    t = correlation_triple(3, 1.4)
    np.testing.assert_allclose(correlation_tensor(build_x_state(t)), (t.t1, t.t2, t.t3), atol=1e-12)


def test_unequal_in_plane_correlations():
    t = CorrelationTriple(m=1, t1=0.3, t2=0.1, t3=-0.2)
    s = build_x_state(t)
    np.testing.assert_allclose(correlation_tensor(s), (0.3, 0.1, -0.2), atol=1e-12)
    np.testing.assert_allclose(spectrum(s).probabilities, closed_form_eigenvalues(t), atol=1e-12)


def test_build_rejects_unphysical_triple():
    with pytest.raises(ValidationError) as info:
        build_x_state(CorrelationTriple(m=1, t1=0.9, t2=0.9, t3=0.5))
    assert info.value.eigenvalue < 0


@pytest.mark.parametrize("matrix", [
    np.eye(4) / 2,
    np.diag([1.2, -0.2, 0, 0]),
    np.eye(3) / 3,
])
def test_from_matrix_validation(matrix):
    with pytest.raises(ValidationError):
        TwoQubitState.from_matrix(matrix)
