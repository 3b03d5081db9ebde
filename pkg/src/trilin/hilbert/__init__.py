"""
Hilbert-space module for trilin.

Truncated three-mode Fock space with conserved-quantity sectors, state
constructors and ladder-operator actions.
"""

from .basis import SectorBasis, Truncation, build_basis, build_sector
from .states import (
    LEAKAGE_LIMIT,
    PhononDistribution,
    StateVector,
    apply_ladder,
    apply_trilinear,
    coherent_amplitudes,
    coherent_state,
    fock_state,
    populations,
    require_same_basis,
    superpose,
)

__all__ = [
    "Truncation",
    "SectorBasis",
    "build_basis",
    "build_sector",
    "StateVector",
    "PhononDistribution",
    "LEAKAGE_LIMIT",
    "fock_state",
    "coherent_amplitudes",
    "coherent_state",
    "superpose",
    "populations",
    "apply_ladder",
    "apply_trilinear",
    "require_same_basis",
]
