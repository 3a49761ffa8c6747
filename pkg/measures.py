#!/usr/bin/env python3
"""
Discord-type correlation measures of two-qubit states.

LQFI: minimum over local generators H_A = (sigma . r) x I of the quantum
Fisher information, Q = 1 - lambda_max(T). OWQD: minimum entropy increase
caused by a rank-1 projective measurement on subsystem B, in bits.

The Fisher information sums over ALL eigen pairs with p_i + p_j > 0,
diagonal pairs included. With that convention F(I/4) = 0 and a pure state
gives the variance of H.
"""
import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

import logger
import numerics
from correlations import CorrelationTriple
from errors import ClosedFormUnavailable, ValidationError
from state import (ZERO_PROBABILITY, SpectralDecomposition, TwoQubitState, closed_form_eigenvalues,
                   spectrum, von_neumann_entropy)

UNIT_TOL = 1e-12
CLOSED_FORM_MARGIN = 1e-9
ANGLE_SLACK = 1e-9

LOCAL_PAULI = [np.kron(numerics.PAULI[q], numerics.IDENTITY2) for q in ("x", "y", "z")]


@dataclass(frozen=True)
class BlochDirection:
    x: float
    y: float
    z: float

    def __post_init__(self):
        norm = math.sqrt(self.x ** 2 + self.y ** 2 + self.z ** 2)
        if abs(norm - 1) > UNIT_TOL:
            raise ValidationError(f"Bloch direction must be a unit vector, |r| = {norm!r}")

    @classmethod
    def from_angles(cls, theta: float, phi: float) -> "BlochDirection":
        return cls(math.sin(theta) * math.cos(phi), math.sin(theta) * math.sin(phi), math.cos(theta))

    @classmethod
    def normalized(cls, vector) -> "BlochDirection":
        v = np.asarray(vector, dtype=float)
        v = v / np.linalg.norm(v)
        return cls(float(v[0]), float(v[1]), float(v[2]))

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def local_generator(self) -> np.ndarray:
        """H_A = (sigma . r) x I_B."""
        return np.kron(numerics.bloch_operator(self.as_array()), numerics.IDENTITY2)


@dataclass(frozen=True)
class MeasurementBasis:
    theta: float
    phi: float

    def __post_init__(self):
        if not -ANGLE_SLACK <= self.theta <= math.pi + ANGLE_SLACK:
            raise ValidationError(f"theta must lie in [0, pi], got {self.theta}")
        if not -ANGLE_SLACK <= self.phi <= 2 * math.pi + ANGLE_SLACK:
            raise ValidationError(f"phi must lie in [0, 2 pi], got {self.phi}")

    def rotation(self) -> np.ndarray:
        """V in SU(2); Pi_k = V|k><k|V^dagger."""
        c, s = math.cos(self.theta / 2), math.sin(self.theta / 2)
        return np.array([[c, -np.exp(-1j * self.phi) * s],
                         [np.exp(1j * self.phi) * s, c]])

    def projectors(self) -> List[np.ndarray]:
        V = self.rotation()
        return [np.outer(V[:, k], V[:, k].conj()) for k in (0, 1)]


@dataclass(frozen=True, eq=False)
class TMatrix:
    matrix: np.ndarray

    def eigenvalues(self) -> np.ndarray:
        return numerics.hermitian_eig(self.matrix).values

    def max_eigenvalue(self) -> float:
        return float(self.eigenvalues()[-1])


# ----------------------------------------------------
# QUANTUM FISHER INFORMATION
# ----------------------------------------------------
def _pair_weights(p: np.ndarray) -> np.ndarray:
    """2 p_i p_j / (p_i + p_j) for p_i + p_j > 0, else 0."""
    total = p[:, None] + p[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        w = np.where(total > 0, 2 * np.outer(p, p) / np.where(total > 0, total, 1.0), 0.0)
    return w


def _eigenbasis(op: np.ndarray, d: SpectralDecomposition) -> np.ndarray:
    return d.vectors.conj().T @ op @ d.vectors


def qfi_spectral(s: TwoQubitState, H, decomposition: Optional[SpectralDecomposition] = None) -> float:
    """F(rho, H) = 1/2 sum (p_i - p_j)^2 / (p_i + p_j) |<psi_i|H|psi_j>|^2 for any Hermitian H."""
    d = decomposition or spectrum(s)
    p = d.probabilities
    Hm = _eigenbasis(numerics.validate_hermitian(H), d)
    total = p[:, None] + p[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        w = np.where(total > 0, (p[:, None] - p[None, :]) ** 2 / np.where(total > 0, total, 1.0), 0.0)
    return float(0.5 * np.sum(w * np.abs(Hm) ** 2))


def qfi_local(s: TwoQubitState, r: BlochDirection,
              decomposition: Optional[SpectralDecomposition] = None) -> float:
    """Tr(rho H_A^2) - sum_{i,j} 2 p_i p_j/(p_i + p_j) |<psi_i|H_A|psi_j>|^2."""
    d = decomposition or spectrum(s)
    H = r.local_generator()
    variance_term = float(np.trace(s.matrix @ H @ H).real)
    Hm = _eigenbasis(H, d)
    value = variance_term - float(np.sum(_pair_weights(d.probabilities) * np.abs(Hm) ** 2))
    return max(value, 0.0) if value > -UNIT_TOL else value


def qfi_sld_oracle(s: TwoQubitState, r: BlochDirection,
                   decomposition: Optional[SpectralDecomposition] = None) -> float:
    """
    Fisher information through the symmetric logarithmic derivative:
    d rho = -i [H_A, rho], L_ij = 2 (d rho)_ij / (p_i + p_j), F = Tr(rho L^2) / 4.
    """
    d = decomposition or spectrum(s)
    p = d.probabilities
    H = r.local_generator()
    drho = _eigenbasis(-1j * (H @ s.matrix - s.matrix @ H), d)
    total = p[:, None] + p[None, :]
    L = np.where(total > 0, 2 * drho / np.where(total > 0, total, 1.0), 0.0)
    return float(np.trace(np.diag(p) @ L @ L).real / 4)


def t_matrix(d: SpectralDecomposition) -> TMatrix:
    """T_lk = sum_{i,j} 2 p_i p_j/(p_i + p_j) <psi_i|s_l x I|psi_j><psi_j|s_k x I|psi_i>."""
    w = _pair_weights(d.probabilities)
    A = np.array([_eigenbasis(op, d) for op in LOCAL_PAULI])
    T = np.einsum("ij,lij,kji->lk", w, A, A).real
    return TMatrix(matrix=(T + T.T) / 2)


def t_matrix_closed(t: CorrelationTriple) -> TMatrix:
    """diag(e_xy, e_xy, e_z) for the t2 = t1 family."""
    if t.t1 != t.t2:
        raise ClosedFormUnavailable("closed-form T needs t2 == t1")
    if abs(t.t1) >= 1 - CLOSED_FORM_MARGIN or t.t3 >= 1 - CLOSED_FORM_MARGIN:
        raise ClosedFormUnavailable(f"closed-form T is singular at t1={t.t1}, t3={t.t3}")
    t1, t3 = t.t1, t.t3
    e_xy = (t3 + 1) * (2 * t1 ** 2 + t3 - 1) / (t1 ** 2 - 1)
    e_z = (2 * t1 ** 2 + t3 - 1) / (t3 - 1)
    return TMatrix(matrix=np.diag([e_xy, e_xy, e_z]))


def _clamp_unit(value: float) -> float:
    return min(max(value, 0.0), 1.0)


def lqfi(s: TwoQubitState) -> float:
    return _clamp_unit(1 - t_matrix(spectrum(s)).max_eigenvalue())


def lqfi_closed(t: CorrelationTriple) -> float:
    """Raises ClosedFormUnavailable when the denominators approach zero."""
    return _clamp_unit(1 - float(np.max(np.diag(t_matrix_closed(t).matrix))))


def lqfi_direction(s: TwoQubitState) -> BlochDirection:
    """Local generator direction attaining the LQFI (top eigenvector of T)."""
    values, vectors = np.linalg.eigh(t_matrix(spectrum(s)).matrix)
    return BlochDirection.normalized(vectors[:, int(np.argmax(values))])


# ----------------------------------------------------
# ONE-WAY QUANTUM DEFICIT
# ----------------------------------------------------
def measured_state(s: TwoQubitState, b: MeasurementBasis) -> TwoQubitState:
    """sum_k (I x Pi_k) rho (I x Pi_k)^dagger; trace preserving."""
    rho = np.zeros((4, 4), dtype=complex)
    for proj in b.projectors():
        P = np.kron(numerics.IDENTITY2, proj)
        rho += P @ s.matrix @ P.conj().T
    return TwoQubitState(matrix=(rho + rho.conj().T) / 2)


def conditional_states(s: TwoQubitState, b: MeasurementBasis) -> List[Tuple[float, Optional[TwoQubitState]]]:
    """(p_k, rho_k) per outcome; rho_k is None when p_k vanishes."""
    outcomes = []
    for proj in b.projectors():
        P = np.kron(numerics.IDENTITY2, proj)
        unnormalized = P @ s.matrix @ P.conj().T
        p_k = float(np.trace(unnormalized).real)
        if p_k <= 1e-15:
            outcomes.append((0.0, None))
            continue
        rho_k = unnormalized / p_k
        outcomes.append((p_k, TwoQubitState(matrix=(rho_k + rho_k.conj().T) / 2)))
    return outcomes


def measured_matrices(matrix: np.ndarray, thetas, phis) -> np.ndarray:
    """
    Post-measurement states for many bases at once, shape (n, 4, 4).

    Same map as measured_state without per-call validation; thetas and phis
    are matching 1-D arrays.
    """
    thetas = np.asarray(thetas, dtype=float).ravel()
    phis = np.asarray(phis, dtype=float).ravel()
    # first column of MeasurementBasis.rotation()
    v = np.stack([np.cos(thetas / 2) + 0j, np.exp(1j * phis) * np.sin(thetas / 2)], axis=-1)
    P0 = v[:, :, None] * v.conj()[:, None, :]
    out = np.zeros((len(thetas), 4, 4), dtype=complex)
    for P in (P0, numerics.IDENTITY2 - P0):
        K = np.einsum("ij,bkl->bikjl", numerics.IDENTITY2, P).reshape(-1, 4, 4)
        out += K @ matrix @ K
    return out


def entropies_bits(matrices: np.ndarray) -> np.ndarray:
    """von Neumann entropy of each Hermitian matrix in a (n, d, d) stack."""
    p = np.linalg.eigvalsh(matrices)
    p = np.where(p < ZERO_PROBABILITY, 0.0, np.minimum(p, 1.0))
    logs = np.log2(np.where(p > 0, p, 1.0))
    return np.maximum(-np.sum(p * logs, axis=-1), 0.0)


def owqd_numeric(s: TwoQubitState) -> Tuple[float, MeasurementBasis]:
    """min over (theta, phi) of S(measured) - S(rho), bits, with the argmin basis."""
    entropy = von_neumann_entropy(s)

    def objective(theta, phi):
        return float(entropies_bits(measured_matrices(s.matrix, [theta], [phi]))[0]) - entropy

    def grid(thetas, phis):
        T, P = np.meshgrid(thetas, phis, indexing="ij")
        return (entropies_bits(measured_matrices(s.matrix, T, P)) - entropy).reshape(T.shape)

    value, (theta, phi) = numerics.minimize_2d(objective, grid_f=grid)
    if value < -1e-9:
        logger.warn(f"negative deficit {value:.3e} from the minimizer")
    return max(value, 0.0), MeasurementBasis(theta, phi)


def _xlog2x(x: float) -> float:
    return x * math.log2(x) if x > 0 else 0.0


def owqd_closed(t: CorrelationTriple) -> float:
    """
    S(measured) - S(rho) for a measurement along the axis keeping the largest
    correlation c = max|t_q|. With c = |t1| this is
    -1/2[(1+t1)log(1+t1) + (1-t1)log(1-t1)]
      + 1/4[2(1+t3)log(1+t3) + (1-t3+2t1)log(1-t3+2t1) + (1-t3-2t1)log(1-t3-2t1)].
    """
    c = max(abs(t.t1), abs(t.t2), abs(t.t3))
    kept = -0.5 * (_xlog2x(1 + c) + _xlog2x(1 - c))
    lost = 0.25 * sum(_xlog2x(4 * p) for p in closed_form_eigenvalues(t))
    return max(kept + lost, 0.0)


def owqd_closed_basis(t: CorrelationTriple) -> MeasurementBasis:
    """Measurement attaining owqd_closed: x (or y) when |t1| >= |t3|, else z."""
    if max(abs(t.t1), abs(t.t2)) >= abs(t.t3):
        return MeasurementBasis(math.pi / 2, 0.0 if abs(t.t1) >= abs(t.t2) else math.pi / 2)
    return MeasurementBasis(0.0, 0.0)


if __name__ == "__main__":
    from correlations import correlation_triple
    from state import build_x_state

    logger.set_print_level("INFO")
    t = correlation_triple(1, 0.5)
    rho = build_x_state(t)
    logger.info(f"lqfi {lqfi(rho):.9f} closed {lqfi_closed(t):.9f}")
    value, basis = owqd_numeric(rho)
    logger.info(f"owqd {value:.9f} at {basis} closed {owqd_closed(t):.9f}")
