import math

import numpy as np
import pytest

from correlations import (MAX_SEPARATION, CorrelationTriple, ModelParams, correlation_triple,
                          g_function, sx_correlation, sz_correlation, toeplitz_matrix)
from errors import SeparationRangeError, ValidationError


@pytest.mark.parametrize("m, alpha, expected", [
    (1, 0.5, 2 / math.pi),
    (2, 0.5, 0.0),
    (3, 0.5, -2 / (3 * math.pi)),
    (1, 2.0, 1 / math.pi),
    (2, 2.0, 0.0),
    (1, 1.0, 2 / math.pi),
    (0, 0.3, 0.0),
])
def test_g_function_values(m, alpha, expected):
    assert g_function(m, alpha) == pytest.approx(expected, abs=1e-12)


def test_g_function_is_even():
    for m in range(1, 6):
        assert g_function(-m, 1.7) == g_function(m, 1.7)


def test_g_function_continuous_at_transition():
    for m in (1, 3, 5):
        assert g_function(m, 1 - 1e-12) == pytest.approx(g_function(m, 1.0), abs=1e-9)


def test_g_function_rejects_negative_alpha():
    with pytest.raises(ValidationError):
        g_function(1, -0.1)


def test_toeplitz_layout():
    T = toeplitz_matrix(3, 0.5)
    g = [g_function(k, 0.5) for k in range(-1, 4)]
    assert T[0].tolist() == pytest.approx([g[2], g[3], g[4]])
    assert T[:, 0].tolist() == pytest.approx([g[2], g[1], g[0]])


@pytest.mark.parametrize("m, alpha, expected", [
    (1, 0.5, 1 / (2 * math.pi)),
    (2, 0.5, 1 / math.pi ** 2),
    (1, 2.0, 1 / (4 * math.pi)),
])
def test_sx_correlation(m, alpha, expected):
    assert sx_correlation(m, alpha) == pytest.approx(expected, abs=1e-12)


def test_sz_correlation():
    assert sz_correlation(1, 0.3) == pytest.approx(-1 / math.pi ** 2, abs=1e-12)
    assert sz_correlation(2, 0.3) == 0.0


@pytest.mark.parametrize("m", [0, MAX_SEPARATION + 1])
def test_separation_range(m):
    with pytest.raises(SeparationRangeError):
        sx_correlation(m, 0.5)


def test_triple_is_isotropic_in_plane():
    t = correlation_triple(3, 0.8)
    assert t.t1 == t.t2
    assert t.m == 3 and t.alpha == 0.8


def test_m3_plateau_values():
    a, c = 2 / math.pi, -2 / (3 * math.pi)
    t = correlation_triple(3, 0.5)
    assert t.t1 == pytest.approx(a ** 2 * (a - c), abs=1e-12)
    assert t.t3 == pytest.approx(-c ** 2, abs=1e-12)


def test_triples_are_physical_across_grid():
    for m in range(1, 6):
        for alpha in np.linspace(0, 5, 26):
            assert correlation_triple(m, float(alpha)).physical()


def test_unphysical_triple_detected():
    assert not CorrelationTriple(m=1, t1=0.9, t2=0.9, t3=0.5).physical()


def test_model_params_validation():
    assert ModelParams(alpha=0.5).J == 1.0
    with pytest.raises(ValidationError):
        ModelParams(alpha=-1)
    with pytest.raises(ValidationError):
        ModelParams(alpha=1, delta=0.5)


@pytest.mark.parametrize("m", [2, 4, 6, -2])
@pytest.mark.parametrize("alpha", [0.3, 0.999, 1.0, 2.5])
def test_even_separation_is_exactly_zero(m, alpha):
    assert g_function(m, alpha) == 0.0


def test_m2_triple_has_no_round_off_residue():
    for alpha in (0.5, 2.0):
        assert correlation_triple(2, alpha).t3 == 0.0
