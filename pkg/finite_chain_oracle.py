#!/usr/bin/env python3
"""
Finite-ring checks of the thermodynamic-limit formulas.

Free fermions: after Jordan-Wigner the Delta = 0 chain is
H = sum_k eps(k) c_k^dagger c_k with eps(k) = -[cos k - (alpha/2) sin 2k].
On a ring of N sites the momenta are 2 pi n / N (integer sector, odd fermion
number) or 2 pi (n + 1/2) / N (half-integer sector, even fermion number).

Spin basis: the 2^N x 2^N Hamiltonian diagonalized directly (N <= 10).
"""
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy.sparse import csr_matrix, identity, kron

import logger
import numerics
from errors import ValidationError

INTEGER = "integer"
HALF_INTEGER = "half-integer"
SECTORS = (INTEGER, HALF_INTEGER)
# fermion-number parity fixed by the boundary condition of each sector
SECTOR_PARITY = {INTEGER: 1, HALF_INTEGER: 0}

ZERO_MODE_TOL = 1e-12
MIN_SEA_N = 8
MAX_RING_N = 65536
MIN_ED_N, MAX_ED_N = 4, 10

# Spin-1/2 operators S = sigma / 2
SX = csr_matrix(numerics.PAULI["x"] / 2)
SY = csr_matrix(numerics.PAULI["y"] / 2)
SZ = csr_matrix(numerics.PAULI["z"] / 2)
I2 = identity(2, format="csr", dtype=complex)


@dataclass(frozen=True)
class FermiSea:
    N: int
    sector: str
    filled: Tuple[float, ...]
    alpha: float
    boundary_modes: Tuple[float, ...] = ()

    @property
    def has_boundary_modes(self) -> bool:
        return len(self.boundary_modes) > 0


def dispersion(k, alpha: float):
    """eps(k) = -J [cos k - alpha/2 sin 2k], J = 1."""
    return -(np.cos(k) - alpha / 2 * np.sin(2 * k))


def _check_ring(N, low, high):
    if not isinstance(N, (int, np.integer)) or N % 2 or not low <= N <= high:
        raise ValidationError(f"ring size N must be even and in [{low}, {high}], got {N}")


def sector_momenta(N: int, sector: str) -> np.ndarray:
    """Momenta of one quantization sector, mapped to (-pi, pi]."""
    if sector not in SECTORS:
        raise ValidationError(f"unknown sector {sector!r}, expected one of {SECTORS}")
    n = np.arange(N, dtype=float)
    shift = 0.5 if sector == HALF_INTEGER else 0.0
    k = 2 * math.pi * (n + shift) / N
    return np.where(k > math.pi, k - 2 * math.pi, k)


def build_sea(N: int, alpha: float, sector: str = HALF_INTEGER) -> FermiSea:
    """Fill the strictly negative modes; |eps| < 1e-12 modes are flagged, not filled."""
    _check_ring(N, MIN_SEA_N, MAX_RING_N)
    if not alpha >= 0:
        raise ValidationError(f"alpha must be >= 0, got {alpha}")
    k = sector_momenta(N, sector)
    eps = dispersion(k, alpha)
    boundary = np.abs(eps) < ZERO_MODE_TOL
    filled = k[(eps < 0) & ~boundary]
    if boundary.any():
        logger.warn(f"N={N} alpha={alpha} {sector}: {int(boundary.sum())} boundary mode(s), occupation ambiguous")
    return FermiSea(N=int(N), sector=sector, filled=tuple(filled.tolist()), alpha=float(alpha),
                    boundary_modes=tuple(k[boundary].tolist()))


def filling_fraction(sea: FermiSea) -> float:
    return len(sea.filled) / sea.N


def finite_g(N: int, alpha: float, m: int, sector: str = HALF_INTEGER) -> float:
    """(2/N) sum_{k filled} cos(k m) - delta_{m,0}."""
    sea = build_sea(N, alpha, sector)
    m = abs(int(m))
    if m > N // 2:
        raise ValidationError(f"|m| must not exceed N/2 = {N // 2}, got {m}")
    value = 2.0 / N * float(np.sum(np.cos(np.asarray(sea.filled) * m)))
    return value - 1.0 if m == 0 else value


def _sector_ground_energy(N: int, alpha: float, sector: str) -> float:
    eps = np.sort(dispersion(sector_momenta(N, sector), alpha))
    eps = np.where(np.abs(eps) < ZERO_MODE_TOL, 0.0, eps)
    negative = eps[eps < 0]
    energy = float(np.sum(negative))
    if len(negative) % 2 == SECTOR_PARITY[sector]:
        return energy
    # wrong fermion parity for this boundary condition: move one mode
    options = []
    if len(negative) < len(eps):
        options.append(energy + eps[len(negative)])
    if len(negative) > 0:
        options.append(energy - negative[-1])
    logger.debug(f"N={N} alpha={alpha} {sector}: parity fix {energy} -> {min(options)}")
    return float(min(options))


def ff_ground_energy(N: int, alpha: float) -> float:
    """Lowest free-fermion energy over both momentum sectors."""
    _check_ring(N, 2, MAX_RING_N)
    return min(_sector_ground_energy(N, alpha, sector) for sector in SECTORS)


# ----------------------------------------------------
# EXACT DIAGONALIZATION
# ----------------------------------------------------
def op_on_sites(ops, N):
    """Kronecker product with ops[site] on the given sites and identity elsewhere."""
    out = None
    for site in range(N):
        piece = ops.get(site, I2)
        out = piece if out is None else kron(out, piece, format="csr")
    return out


def spin_hamiltonian(N: int, alpha: float):
    """
    Periodic ring, J = 1, Delta = 0:
    H = sum_l -(Sx_l Sx_l+1 + Sy_l Sy_l+1) - alpha (Sx_l-1 Sz_l Sy_l+1 - Sy_l-1 Sz_l Sx_l+1)
    """
    dim = 2 ** N
    H = csr_matrix((dim, dim), dtype=complex)
    for l in range(N):
        right = (l + 1) % N
        left = (l - 1) % N
        H = H - op_on_sites({l: SX, right: SX}, N) - op_on_sites({l: SY, right: SY}, N)
        H = H - alpha * (op_on_sites({left: SX, l: SZ, right: SY}, N)
                         - op_on_sites({left: SY, l: SZ, right: SX}, N))
    return H


def ed_ground_energy(N: int, alpha: float) -> float:
    if not isinstance(N, (int, np.integer)) or not MIN_ED_N <= N <= MAX_ED_N:
        raise ValidationError(f"exact diagonalization needs {MIN_ED_N} <= N <= {MAX_ED_N}, got {N}")
    H = spin_hamiltonian(N, alpha).toarray()
    return float(numerics.hermitian_eig(H).values[0])


if __name__ == "__main__":
    logger.set_print_level("INFO")
    for alpha in (0.0, 0.5, 2.0):
        logger.info(f"N=8 alpha={alpha}: ED {ed_ground_energy(8, alpha):.12f} "
                    f"free fermions {ff_ground_energy(8, alpha):.12f}")
    logger.info(f"finite_g(4096, 0.5, 1) = {finite_g(4096, 0.5, 1):.6f} vs 2/pi = {2 / math.pi:.6f}")
