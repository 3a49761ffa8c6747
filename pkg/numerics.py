#!/usr/bin/env python3
"""
Small dense linear algebra and deterministic minimization shared by the
other modules: Hermitian eigensystems, determinants, a grid + golden-section
minimizer on the (theta, phi) sphere chart and finite differences.
"""
import math
from typing import Callable, NamedTuple, Optional, Tuple

import numpy as np

import logger
from errors import ValidationError

HERMITIAN_TOL = 1e-12
DEGENERACY_TOL = 1e-9
MAX_EIG_DIM = 1024  # 2^10, exact diagonalization at N = 10
MAX_DET_DIM = 64

THETA_POINTS = 64
PHI_POINTS = 128
REFINE_TOL = 1e-8
MAX_REFINE_ROUNDS = 200

INV_PHI = (math.sqrt(5) - 1) / 2  # 1 / phi
INV_PHI_SQUARE = (3 - math.sqrt(5)) / 2  # 1 / phi^2

PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}
IDENTITY2 = np.eye(2, dtype=complex)


class EigenSystem(NamedTuple):
    """Ascending eigenvalues with the matching orthonormal eigenvector columns."""
    values: np.ndarray
    vectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.vectors * self.values) @ self.vectors.conj().T


# ----------------------------------------------------
# MATRICES
# ----------------------------------------------------
def bloch_operator(r) -> np.ndarray:
    """sigma . r for a real 3-vector r."""
    rx, ry, rz = (float(c) for c in r)
    return rx * PAULI["x"] + ry * PAULI["y"] + rz * PAULI["z"]


def validate_hermitian(M, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Return M as a complex array or raise naming the worst asymmetric pair."""
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] == 0:
        raise ValidationError(f"expected a non-empty square matrix, got shape {M.shape}")
    deviation = np.abs(M - M.conj().T)
    worst = np.unravel_index(int(np.argmax(deviation)), deviation.shape)
    scale = max(1.0, float(np.max(np.abs(M))))
    if deviation[worst] > tol * scale:
        i, j = int(worst[0]), int(worst[1])
        raise ValidationError(
            f"matrix is not Hermitian: |M[{i}][{j}] - conj(M[{j}][{i}])| = {deviation[worst]:.3e}"
        )
    return M


def _orthonormalize_clusters(values: np.ndarray, vectors: np.ndarray) -> np.ndarray:
    """Re-orthonormalize eigenvector columns inside each degenerate cluster."""
    start = 0
    n = len(values)
    while start < n:
        stop = start + 1
        while stop < n and values[stop] - values[stop - 1] < DEGENERACY_TOL:
            stop += 1
        if stop - start > 1:
            q, r = np.linalg.qr(vectors[:, start:stop])
            # fix the QR sign freedom so the output is reproducible
            phases = np.diag(r).copy()
            phases[np.abs(phases) < 1e-300] = 1.0
            vectors[:, start:stop] = q * (phases / np.abs(phases))
            logger.debug(f"re-orthonormalized degenerate cluster {start}..{stop - 1}")
        start = stop
    return vectors


def hermitian_eig(M) -> EigenSystem:
    """
    Eigen-decomposition of a Hermitian matrix.

    Eigenvalues are ascending, eigenvectors are the columns of `vectors`.
    Raises ValidationError for non-Hermitian input or dim > MAX_EIG_DIM.
    """
    M = validate_hermitian(M)
    if M.shape[0] > MAX_EIG_DIM:
        raise ValidationError(f"dimension {M.shape[0]} exceeds {MAX_EIG_DIM}")
    values, vectors = np.linalg.eigh((M + M.conj().T) / 2)
    vectors = _orthonormalize_clusters(values, np.array(vectors, dtype=complex))
    return EigenSystem(values=np.asarray(values, dtype=float), vectors=vectors)


def determinant(M) -> float:
    """Determinant of a real square matrix; exact closed form up to 2 x 2."""
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] == 0:
        raise ValidationError(f"determinant needs a non-empty square matrix, got shape {M.shape}")
    n = M.shape[0]
    if n > MAX_DET_DIM:
        raise ValidationError(f"determinant dimension {n} exceeds {MAX_DET_DIM}")
    if n == 1:
        return float(M[0, 0])
    if n == 2:
        return float(M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0])
    # LAPACK getrf: LU with partial pivoting
    return float(np.linalg.det(M))


# ----------------------------------------------------
# MINIMIZATION
# ----------------------------------------------------
def golden_section(f: Callable[[float], float], a: float, b: float,
                   tol: float = REFINE_TOL) -> Tuple[float, float]:
    """
    Golden-section search.

    Given a function f with a single local minimum in the interval [a, b],
    returns (x, f(x)) with x within tol of the minimizer.
    """
    a, b = min(a, b), max(a, b)
    h = b - a
    if h <= tol:
        x = (a + b) / 2
        return x, f(x)

    # Required steps to achieve tolerance
    n = int(math.ceil(math.log(tol / h) / math.log(INV_PHI)))

    c = a + INV_PHI_SQUARE * h
    d = a + INV_PHI * h
    yc = f(c)
    yd = f(d)

    for _ in range(n - 1):
        if yc < yd:
            b = d
            d = c
            yd = yc
            h = INV_PHI * h
            c = a + INV_PHI_SQUARE * h
            yc = f(c)
        else:
            a = c
            c = d
            yc = yd
            h = INV_PHI * h
            d = a + INV_PHI * h
            yd = f(d)

    x = (a + d) / 2 if yc < yd else (c + b) / 2
    return x, f(x)


def minimize_2d(f: Callable[[float, float], float],
                theta_points: int = THETA_POINTS,
                phi_points: int = PHI_POINTS,
                tol: float = REFINE_TOL,
                grid_f: Optional[Callable[[np.ndarray, np.ndarray], np.ndarray]] = None,
                ) -> Tuple[float, Tuple[float, float]]:
    """
    Minimize f(theta, phi) over [0, pi] x [0, 2 pi].

    A coarse grid (endpoints included) picks the start; ties go to the
    lexicographically smallest (theta, phi). Coordinate-wise golden-section
    rounds then refine until neither coordinate moves by more than tol.
    Only improvements are accepted, so the result never exceeds a grid sample.

    grid_f(thetas, phis), when given, returns the whole coarse grid as a
    (len(thetas), len(phis)) array in one call and must agree with f.
    """
    thetas = np.linspace(0.0, math.pi, theta_points)
    phis = np.linspace(0.0, 2 * math.pi, phi_points)

    if grid_f is not None:
        values = np.asarray(grid_f(thetas, phis), dtype=float).reshape(theta_points, phi_points)
    else:
        values = np.array([[f(float(theta), float(phi)) for phi in phis] for theta in thetas])
    # argmin returns the first occurrence, i.e. the smallest theta then phi
    i, j = np.unravel_index(int(np.argmin(values)), values.shape)
    best = float(values[i, j])
    best_theta, best_phi = float(thetas[i]), float(phis[j])

    width_theta = thetas[1] - thetas[0] if theta_points > 1 else math.pi
    width_phi = phis[1] - phis[0] if phi_points > 1 else 2 * math.pi

    for round_no in range(MAX_REFINE_ROUNDS):
        move_theta = move_phi = 0.0

        lo, hi = max(0.0, best_theta - width_theta), min(math.pi, best_theta + width_theta)
        theta, value = golden_section(lambda t: f(t, best_phi), lo, hi, tol / 4)
        if value < best:
            move_theta = abs(theta - best_theta)
            best, best_theta = value, theta

        lo, hi = max(0.0, best_phi - width_phi), min(2 * math.pi, best_phi + width_phi)
        phi, value = golden_section(lambda p: f(best_theta, p), lo, hi, tol / 4)
        if value < best:
            move_phi = abs(phi - best_phi)
            best, best_phi = value, phi

        if move_theta < tol and move_phi < tol:
            logger.debug(f"minimize_2d converged after {round_no + 1} rounds at "
                         f"({best_theta:.10f}, {best_phi:.10f}) -> {best:.12g}")
            break
        width_theta = max(2 * move_theta, width_theta / 4, 10 * tol)
        width_phi = max(2 * move_phi, width_phi / 4, 10 * tol)
    else:
        logger.warn(f"minimize_2d stopped after {MAX_REFINE_ROUNDS} rounds without converging")

    return best, (best_theta, best_phi)


def quasi_random_points(n: int, seed: float = 0.5) -> np.ndarray:
    """
    n deterministic low-discrepancy points on [0, pi] x [0, 2 pi]
    (additive recurrence with the plastic-number constants).
    """
    g = 1.32471795724474602596
    steps = np.arange(1, n + 1)[:, None] * np.array([1 / g, 1 / g ** 2])
    unit = np.mod(seed + steps, 1.0)
    return unit * np.array([math.pi, 2 * math.pi])


# ----------------------------------------------------
# DIFFERENCES
# ----------------------------------------------------
def central_difference(samples, h: float) -> np.ndarray:
    """
    First derivative of uniformly spaced samples.

    Interior points use (f[i+1] - f[i-1]) / 2h, the endpoints one-sided
    first-order differences.
    """
    f = np.asarray(samples, dtype=float)
    if f.ndim != 1 or len(f) < 3:
        raise ValidationError(f"central_difference needs at least 3 samples, got {np.size(f)}")
    if not h > 0:
        raise ValidationError(f"grid step must be positive, got {h}")
    return np.gradient(f, h, edge_order=1)


if __name__ == "__main__":
    print(hermitian_eig(PAULI["x"]).values)
    print(minimize_2d(lambda t, p: math.cos(t)))
    print(central_difference(np.arange(5) ** 2, 1.0))
