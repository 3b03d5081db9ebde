"""
Normal-mode module for trilin.

Derives the coupled-mode frequencies, detuning, coupling rate and ion spacing
from trap settings.
"""

from .analysis import (
    build_mode_system,
    coupling_rate,
    ion_spacing,
    mode_report,
    normal_modes,
    resonance_ratio,
    resonant_trap,
)
from .types import REFERENCE_TRAP_KHZ, ModeSystem, ModeTable, TrapConfig

__all__ = [
    "TrapConfig",
    "ModeSystem",
    "ModeTable",
    "REFERENCE_TRAP_KHZ",
    "ion_spacing",
    "normal_modes",
    "resonance_ratio",
    "coupling_rate",
    "build_mode_system",
    "resonant_trap",
    "mode_report",
]
