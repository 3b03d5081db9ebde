"""
Dynamics module for trilin.

Trilinear Hamiltonians over conserved-quantity sectors, their spectra and
time propagation.
"""

from .hamiltonian import (
    HamiltonianOp,
    build_hamiltonian,
    lab_frame_hamiltonian,
    schwinger_action,
    single_excitation_sector,
    tavis_cummings_hamiltonian,
    tridiagonal_bands,
)
from .propagation import (
    Propagator,
    energy,
    evolve,
    evolve_series,
    krylov_expm_block,
    quench_schedule,
    sector_weights,
)
from .spectrum import SpectrumSlice, avoided_crossing_scan, sector_spectrum, spectral_offsets

__all__ = [
    "HamiltonianOp",
    "build_hamiltonian",
    "lab_frame_hamiltonian",
    "tavis_cummings_hamiltonian",
    "schwinger_action",
    "single_excitation_sector",
    "tridiagonal_bands",
    "SpectrumSlice",
    "sector_spectrum",
    "avoided_crossing_scan",
    "spectral_offsets",
    "Propagator",
    "evolve",
    "evolve_series",
    "krylov_expm_block",
    "quench_schedule",
    "sector_weights",
    "energy",
]
