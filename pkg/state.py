#!/usr/bin/env python3
"""
Two-site reduced density matrices in X form, their spectra and entropies.

Basis order is |00>, |01>, |10>, |11> with qubit A = site l, qubit B = site l+m.
"""
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Tuple

import numpy as np

import logger
import numerics
from correlations import CorrelationTriple
from errors import ValidationError

TRACE_TOL = 1e-12
POSITIVITY_TOL = 1e-12
ZERO_PROBABILITY = 1e-14

SIGMA_SIGMA = {
    q: np.kron(numerics.PAULI[q], numerics.PAULI[q]) for q in ("x", "y", "z")
}


class SpectralDecomposition(NamedTuple):
    """rho = sum_i probabilities[i] |psi_i><psi_i| with psi_i = vectors[:, i]."""
    probabilities: np.ndarray
    vectors: np.ndarray


@dataclass(frozen=True, eq=False)
class TwoQubitState:
    matrix: np.ndarray
    provenance: Optional[CorrelationTriple] = None

    @classmethod
    def from_matrix(cls, matrix, provenance: Optional[CorrelationTriple] = None) -> "TwoQubitState":
        """Validated construction: Hermitian 4 x 4, unit trace, positive."""
        M = numerics.validate_hermitian(matrix)
        if M.shape != (4, 4):
            raise ValidationError(f"two-qubit state must be 4 x 4, got {M.shape}")
        trace = np.trace(M).real
        if abs(trace - 1) > TRACE_TOL:
            raise ValidationError(f"state trace is {trace!r}, expected 1")
        lowest = float(numerics.hermitian_eig(M).values[0])
        if lowest < -POSITIVITY_TOL:
            raise ValidationError(f"state is not positive: eigenvalue {lowest:.3e}", eigenvalue=lowest)
        return cls(matrix=M, provenance=provenance)


def x_state_elements(t: CorrelationTriple) -> Tuple[float, float, float]:
    """(u, omega, y) with u = 1/4 + <SzSz>, omega = 1/4 - <SzSz>, y = <SxSx> + <SySy>."""
    return (1 + t.t3) / 4, (1 - t.t3) / 4, (t.t1 + t.t2) / 4


def closed_form_eigenvalues(t: CorrelationTriple) -> np.ndarray:
    """Ascending eigenvalues of (1/4)(I + t1 XX + t2 YY + t3 ZZ)."""
    values = [
        (1 + t.t3 + (t.t1 - t.t2)) / 4,
        (1 + t.t3 - (t.t1 - t.t2)) / 4,
        (1 - t.t3 + (t.t1 + t.t2)) / 4,
        (1 - t.t3 - (t.t1 + t.t2)) / 4,
    ]
    return np.sort(values)


def build_x_state(t: CorrelationTriple) -> TwoQubitState:
    lowest = float(closed_form_eigenvalues(t)[0])
    if lowest < -POSITIVITY_TOL:
        raise ValidationError(
            f"unphysical correlations t=({t.t1}, {t.t2}, {t.t3}): eigenvalue {lowest:.3e}",
            eigenvalue=lowest,
        )
    u, omega, y = x_state_elements(t)
    matrix = np.zeros((4, 4), dtype=complex)
    matrix[0, 0] = matrix[3, 3] = u
    matrix[1, 1] = matrix[2, 2] = omega
    matrix[1, 2] = matrix[2, 1] = y
    matrix[0, 3] = matrix[3, 0] = (t.t1 - t.t2) / 4
    return TwoQubitState(matrix=matrix, provenance=t)


def spectrum(s: TwoQubitState) -> SpectralDecomposition:
    eig = numerics.hermitian_eig(s.matrix)
    p = np.where(np.abs(eig.values) < ZERO_PROBABILITY, 0.0, eig.values)
    p = np.clip(p, 0.0, 1.0)
    return SpectralDecomposition(probabilities=p, vectors=eig.vectors)


def von_neumann_entropy(s: TwoQubitState) -> float:
    """-sum p log2 p in bits, 0 log 0 = 0."""
    p = spectrum(s).probabilities
    p = p[p > 0]
    return float(max(0.0, -np.sum(p * np.log2(p))))


def expectation(s: TwoQubitState, operator) -> float:
    return float(np.trace(s.matrix @ np.asarray(operator)).real)


def correlation_tensor(s: TwoQubitState) -> Tuple[float, float, float]:
    """(<XX>, <YY>, <ZZ>); equals (t1, t2, t3) for states built from a triple."""
    return tuple(expectation(s, SIGMA_SIGMA[q]) for q in ("x", "y", "z"))


def random_x_state(rng: np.random.Generator) -> TwoQubitState:
    """Random physical X state: Dirichlet diagonal, coherences inside the positivity bounds."""
    a, b, c, d = rng.dirichlet(np.ones(4))
    y = math.sqrt(b * c) * rng.uniform(0, 1) * np.exp(2j * math.pi * rng.uniform())
    z = math.sqrt(a * d) * rng.uniform(0, 1) * np.exp(2j * math.pi * rng.uniform())
    matrix = np.array([
        [a, 0, 0, z],
        [0, b, y, 0],
        [0, np.conj(y), c, 0],
        [np.conj(z), 0, 0, d],
    ], dtype=complex)
    return TwoQubitState.from_matrix(matrix)


if __name__ == "__main__":
    from correlations import correlation_triple

    rho = build_x_state(correlation_triple(1, 0.5))
    logger.set_print_level("DEBUG")
    logger.info(f"spectrum {spectrum(rho).probabilities}")
    logger.info(f"entropy {von_neumann_entropy(rho):.6f} bits, log2(4) = {math.log2(4)}")
