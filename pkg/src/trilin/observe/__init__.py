"""
Observation module for trilin.

Sideband signal synthesis, phonon-number tomography and distribution fits.
"""

from .fits import FitResult, SinusoidFit, fit_geometric, fit_poisson, fit_sinusoid
from .signals import (
    SidebandSignal,
    contrast_envelope,
    probe_spectrum,
    synthesize_sideband,
)
from .tomography import (
    CONDITION_LIMIT,
    TomographyResult,
    nyquist_limit,
    reconstruct_distribution,
    reconstruct_with_diagnostics,
)

__all__ = [
    "SidebandSignal",
    "synthesize_sideband",
    "contrast_envelope",
    "probe_spectrum",
    "TomographyResult",
    "CONDITION_LIMIT",
    "nyquist_limit",
    "reconstruct_distribution",
    "reconstruct_with_diagnostics",
    "FitResult",
    "SinusoidFit",
    "fit_poisson",
    "fit_geometric",
    "fit_sinusoid",
]
