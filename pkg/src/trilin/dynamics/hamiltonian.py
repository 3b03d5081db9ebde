"""
Block-tridiagonal trilinear Hamiltonians over a SectorBasis.

All generators are H/hbar in rad/s. Within a sector the kets run by
descending n_a, so the coupling xi (a+bc + ab+c+) only links neighbors and
every block is real symmetric tridiagonal. Blocks are stored as two bands:
`diagonal[i]` and `upper[i]` = <i|H|i+1> (zero across sector boundaries).
"""

import logging
import threading
from typing import Literal, Optional

import numpy as np
from scipy import sparse
from scipy.linalg import eigh_tridiagonal

from ..hilbert import SectorBasis, StateVector, apply_ladder, require_same_basis
from ..shared import FloatArray, IntArray, LadderDirection, Mode, SectorLabel

logger = logging.getLogger(__name__)

Frame = Literal["rotating", "lab", "tavis-cummings"]


def coupling_band(kets: IntArray, xi: float) -> FloatArray:
    """
    <k_i| xi a+bc |k_{i+1}> for consecutive kets of one sector.

    With k_{i+1} = (m_a, m_b, m_c) the element is xi sqrt((m_a + 1) m_b m_c).
    """
    return xi * np.sqrt(
        kets[:-1, 0].astype(float) * kets[1:, 1].astype(float) * kets[1:, 2].astype(float)
    )


def tridiagonal_bands(kets: IntArray, xi: float, delta: float) -> tuple[FloatArray, FloatArray]:
    """Rotating-frame (diagonal, off-diagonal) bands of one sector."""
    return delta * kets[:, 0].astype(float), coupling_band(kets, xi)


def fix_signs(vectors: FloatArray, tolerance: float = 1e-12) -> FloatArray:
    """Flip eigenvector columns so their first nonzero component is positive."""
    fixed = vectors.copy()
    for column in range(fixed.shape[1]):
        nonzero = np.flatnonzero(np.abs(fixed[:, column]) > tolerance)
        if len(nonzero) and fixed[nonzero[0], column] < 0:
            fixed[:, column] *= -1.0
    return fixed


def eigh_bands(diagonal: FloatArray, off: FloatArray) -> tuple[FloatArray, FloatArray]:
    """Ascending eigenvalues and sign-fixed eigenvectors of a tridiagonal block."""
    if len(diagonal) == 1:
        return diagonal.astype(float).copy(), np.ones((1, 1))
    values, vectors = eigh_tridiagonal(diagonal, off)
    return values, fix_signs(vectors)


class HamiltonianOp:
    """
    Immutable block-diagonal generator H/hbar over a SectorBasis.

    Per-sector eigendecompositions are computed on first use and cached.
    """

    def __init__(
        self,
        basis: SectorBasis,
        diagonal: FloatArray,
        upper: FloatArray,
        xi: float,
        delta: float,
        frame: Frame = "rotating",
    ):
        self.basis = basis
        self.diagonal = diagonal
        self.upper = upper
        self.diagonal.setflags(write=False)
        self.upper.setflags(write=False)
        self.xi = xi
        self.delta = delta
        self.frame = frame
        self._eigen_cache: dict[int, tuple[FloatArray, FloatArray]] = {}
        self._lock = threading.Lock()

    def bands(self, sector: int) -> tuple[FloatArray, FloatArray]:
        """(diagonal, off-diagonal) of one sector block."""
        span = self.basis.sector_slice(sector)
        return self.diagonal[span], self.upper[span.start:span.stop - 1]

    def block(self, sector: int) -> FloatArray:
        """Dense Hermitian block; the lower triangle mirrors the upper one."""
        diagonal, off = self.bands(sector)
        matrix = np.diag(diagonal)
        if len(off):
            matrix += np.diag(off, 1)
            matrix += np.diag(off, 1).T
        return matrix

    def to_sparse(self) -> sparse.csr_matrix:
        """Full block-diagonal matrix."""
        off = self.upper[:-1]
        return sparse.diags([off, self.diagonal, off], [-1, 0, 1], format="csr")

    def eigensystem(self, sector: int) -> tuple[FloatArray, FloatArray]:
        """Cached (eigenvalues, eigenvectors) of one sector."""
        cached = self._eigen_cache.get(sector)
        if cached is not None:
            return cached
        result = eigh_bands(*self.bands(sector))
        with self._lock:
            self._eigen_cache.setdefault(sector, result)
        return result

    def apply(self, state: StateVector) -> StateVector:
        """H|psi> (unnormalized)."""
        require_same_basis(self.basis, state.basis)
        psi = state.amplitudes
        off = self.upper[:-1]
        result = self.diagonal * psi
        result[:-1] += off * psi[1:]
        result[1:] += off * psi[:-1]
        return StateVector(self.basis, result, state.leakage)

    def expectation(self, state: StateVector) -> float:
        """<psi|H|psi> in rad/s."""
        return float(np.real(np.vdot(state.amplitudes, self.apply(state).amplitudes)))

    def max_asymmetry(self) -> float:
        """Largest |H - H+| entry; zero by construction."""
        matrix = self.to_sparse()
        difference = matrix - matrix.conj().T
        return float(abs(difference).max()) if difference.nnz else 0.0

    def __repr__(self) -> str:
        return (
            f"HamiltonianOp(frame={self.frame}, xi={self.xi:.6g}, delta={self.delta:.6g}, "
            f"basis={self.basis!r})"
        )


def _upper_band(basis: SectorBasis, xi: float) -> FloatArray:
    kets = basis.kets
    upper = np.zeros(basis.dimension)
    same_sector = basis.sector_of[:-1] == basis.sector_of[1:]
    upper[:-1] = np.where(same_sector, coupling_band(kets, xi), 0.0)
    return upper


def build_hamiltonian(basis: SectorBasis, xi: float, delta: float) -> HamiltonianOp:
    """
    Rotating-frame generator delta n_a + xi (a+bc + ab+c+).

    The bare mode energies are gauged away: within a sector they add
    delta n_a plus a constant.
    """
    if xi < 0:
        raise ValueError("Coupling rate must be non-negative")
    diagonal = delta * basis.n_a.astype(float)
    logger.debug(f"Building rotating-frame Hamiltonian on {basis!r}")
    return HamiltonianOp(basis, diagonal, _upper_band(basis, xi), xi, delta, "rotating")


def lab_frame_hamiltonian(
    basis: SectorBasis, xi: float, omega_a: float, omega_b: float, omega_c: float
) -> HamiltonianOp:
    """Generator with bare energies wa n_a + wb n_b + wc n_c restored."""
    if xi < 0:
        raise ValueError("Coupling rate must be non-negative")
    diagonal = (
        omega_a * basis.n_a.astype(float)
        + omega_b * basis.n_b.astype(float)
        + omega_c * basis.n_c.astype(float)
    )
    return HamiltonianOp(
        basis, diagonal, _upper_band(basis, xi), xi, omega_a - omega_b - omega_c, "lab"
    )


def tavis_cummings_hamiltonian(basis: SectorBasis, xi: float, omega_c: float) -> HamiltonianOp:
    """
    Collective-spin form wc (c+c + Jz) + xi (c+ J- + c J+).

    Jz = (a+a - bb+)/2, J- = ab+, J+ = a+b. The coupling terms reproduce
    a+bc + ab+c+ exactly; only the diagonal differs from the rotating frame.
    """
    if xi < 0:
        raise ValueError("Coupling rate must be non-negative")
    n_a = basis.n_a.astype(float)
    n_b = basis.n_b.astype(float)
    n_c = basis.n_c.astype(float)
    j_z = 0.5 * (n_a - (n_b + 1.0))
    diagonal = omega_c * (n_c + j_z)
    return HamiltonianOp(basis, diagonal, _upper_band(basis, xi), xi, 0.0, "tavis-cummings")


def sector_lookup(basis: SectorBasis, sector: int | SectorLabel) -> int:
    """Accept either a sector position or an (N1, N2) label."""
    if isinstance(sector, tuple):
        return basis.sector_index(sector)
    return int(sector)


def single_excitation_sector(basis: SectorBasis) -> int:
    """Position of the {|100>, |011>} sector."""
    return basis.sector_index((1, 1))


def block_norm_bound(diagonal: FloatArray, off: Optional[FloatArray] = None) -> float:
    """Gershgorin bound on the spectral radius of a tridiagonal block."""
    bound = float(np.max(np.abs(diagonal))) if len(diagonal) else 0.0
    if off is not None and len(off):
        bound += 2.0 * float(np.max(np.abs(off)))
    return bound


def schwinger_action(state: StateVector, component: str) -> StateVector:
    """
    Collective-spin operators built from modes a and b (unnormalized result).

    plus: J+ = a+b, minus: J- = ab+, z: Jz = (a+a - bb+)/2.
    """
    if component == "plus":
        return apply_ladder(apply_ladder(state, Mode.B, LadderDirection.LOWER), Mode.A, LadderDirection.RAISE)
    if component == "minus":
        return apply_ladder(apply_ladder(state, Mode.A, LadderDirection.LOWER), Mode.B, LadderDirection.RAISE)
    if component == "z":
        basis = state.basis
        j_z = 0.5 * (basis.n_a.astype(float) - (basis.n_b.astype(float) + 1.0))
        return StateVector(basis, j_z * state.amplitudes, state.leakage)
    raise ValueError(f"Unknown collective-spin component '{component}'; use plus, minus or z")
