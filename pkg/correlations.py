#!/usr/bin/env python3
"""
Thermodynamic-limit spin correlators of the XX chain with three-spin
interaction (Delta = 0, J = 1) as functions of the coupling ratio alpha = J'/J.

G(m) is the free-fermion contraction, <S^x S^x> follows from an m x m
Toeplitz determinant of G values and <S^z S^z> = -G(m)^2 / 4.
"""
import math
from dataclasses import dataclass

import numpy as np

from errors import SeparationRangeError, ValidationError
import numerics

MAX_SEPARATION = 16


@dataclass(frozen=True)
class ModelParams:
    alpha: float
    J: float = 1.0
    delta: float = 0.0

    def __post_init__(self):
        if not self.alpha >= 0:
            raise ValidationError(f"alpha must be >= 0, got {self.alpha}")
        if self.J != 1.0 or self.delta != 0.0:
            raise ValidationError("only J = 1 and delta = 0 are supported")


@dataclass(frozen=True)
class CorrelationTriple:
    """t_q = 4 <S^q_l S^q_{l+m}> at separation m; t2 == t1 for this chain."""
    m: int
    t1: float
    t2: float
    t3: float
    alpha: float = float("nan")

    def physical(self, tol: float = 1e-12) -> bool:
        return 1 - self.t3 >= 2 * abs(self.t1) - tol and 1 + self.t3 >= -tol


def _check_alpha(alpha):
    if not alpha >= 0:
        raise ValidationError(f"alpha must be >= 0, got {alpha}")


def g_function(m: int, alpha: float) -> float:
    """
    G_{l,l+m}. Zero at m = 0 (half filling), even in m.

    alpha < 1:  2/(m pi) sin(m pi/2)
    alpha >= 1: (1 - (-1)^m)/(m pi) sin(m arcsin(1/alpha))
    """
    _check_alpha(alpha)
    m = abs(int(m))
    # even separations vanish on both branches (including m = 0)
    if m % 2 == 0:
        return 0.0
    if alpha < 1:
        return 2.0 / (m * math.pi) * math.sin(m * math.pi / 2)
    return 2.0 / (m * math.pi) * math.sin(m * math.asin(1.0 / alpha))


def toeplitz_matrix(m: int, alpha: float) -> np.ndarray:
    """Entry (i, j) = G(j - i + 1): first row G1..Gm, first column descends to G(-m+2)."""
    _check_separation(m)
    values = {k: g_function(k, alpha) for k in range(-m + 2, m + 1)}
    return np.array([[values[j - i + 1] for j in range(m)] for i in range(m)])


def _check_separation(m):
    if not isinstance(m, (int, np.integer)) or m < 1 or m > MAX_SEPARATION:
        raise SeparationRangeError(f"separation m must be an integer in 1..{MAX_SEPARATION}, got {m}")


def sx_correlation(m: int, alpha: float) -> float:
    """<S^x_l S^x_{l+m}> = det(T_m) / 4."""
    return numerics.determinant(toeplitz_matrix(m, alpha)) / 4


def sz_correlation(m: int, alpha: float) -> float:
    """<S^z_l S^z_{l+m}> = -G(m)^2 / 4."""
    if m < 1:
        raise SeparationRangeError(f"separation m must be >= 1, got {m}")
    return -g_function(m, alpha) ** 2 / 4


def correlation_triple(m: int, alpha: float) -> CorrelationTriple:
    t1 = 4 * sx_correlation(m, alpha)
    return CorrelationTriple(m=int(m), t1=t1, t2=t1, t3=4 * sz_correlation(m, alpha), alpha=float(alpha))


if __name__ == "__main__":
    for alpha in (0.5, 1.0, 2.0):
        for m in (1, 2, 3):
            print(alpha, correlation_triple(m, alpha))
