"""
Per-sector spectra and detuning scans.
"""

import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from ..hilbert import SectorBasis
from ..shared import FloatArray, SectorLabel
from .hamiltonian import (
    HamiltonianOp,
    eigh_bands,
    sector_lookup,
    tridiagonal_bands,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class SpectrumSlice:
    """Eigenvalues (rad/s, ascending) of one sector at one detuning."""

    delta: float
    label: SectorLabel
    eigenvalues: FloatArray
    eigenvectors: Optional[FloatArray] = field(default=None, repr=False)

    @property
    def gap(self) -> float:
        """Spread between the extreme eigenvalues."""
        return float(self.eigenvalues[-1] - self.eigenvalues[0])


def sector_spectrum(
    hamiltonian: HamiltonianOp, sector: int | SectorLabel, with_vectors: bool = True
) -> SpectrumSlice:
    """
    Spectrum of one sector of a Hamiltonian.

    Eigenvectors are sign-fixed so their first nonzero component is positive.
    """
    position = sector_lookup(hamiltonian.basis, sector)
    values, vectors = hamiltonian.eigensystem(position)
    return SpectrumSlice(
        delta=hamiltonian.delta,
        label=hamiltonian.basis.labels[position],
        eigenvalues=values,
        eigenvectors=vectors if with_vectors else None,
    )


def avoided_crossing_scan(
    basis: SectorBasis,
    xi: float,
    delta_grid: Sequence[float],
    sector: SectorLabel = (1, 1),
) -> list[SpectrumSlice]:
    """
    Rotating-frame spectrum of one sector across a detuning grid.

    Only the chosen block is rebuilt per detuning. For the single-excitation
    sector the gap is sqrt(delta^2 + 4 xi^2).
    """
    if len(delta_grid) == 0:
        raise ValueError("Detuning grid must not be empty")
    kets = basis.sector_kets(basis.sector_index(sector))
    slices = []
    for delta in delta_grid:
        values, vectors = eigh_bands(*tridiagonal_bands(kets, xi, float(delta)))
        slices.append(SpectrumSlice(float(delta), tuple(sector), values, vectors))
    logger.debug(f"Scanned sector {tuple(sector)} over {len(slices)} detunings")
    return slices


def spectral_offsets(first: HamiltonianOp, second: HamiltonianOp) -> list[tuple[float, float]]:
    """
    Per-sector (constant shift, max deviation) between two spectra.

    The shift is the mean eigenvalue difference; the deviation is how far the
    differences stray from it.
    """
    if first.basis.num_sectors != second.basis.num_sectors:
        raise ValueError("Hamiltonians must share a sector layout")
    offsets = []
    for sector in range(first.basis.num_sectors):
        difference = first.eigensystem(sector)[0] - second.eigensystem(sector)[0]
        shift = float(np.mean(difference))
        offsets.append((shift, float(np.max(np.abs(difference - shift)))))
    return offsets
