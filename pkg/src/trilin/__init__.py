"""
trilin - trilinear coupling of three trapped-ion phonon modes.

Derives mode frequencies and the coupling rate from trap settings, evolves
the three-mode Fock space sector by sector, and reproduces avoided-crossing,
energy-exchange, Jaynes-Cummings and down-conversion experiments.
"""

__version__ = "0.4.0"
__author__ = "trilin contributors"

from .config import AppSettings, ScenarioConfig, get_settings, load_run_config
from .shared import TrilinError

__all__ = [
    "__version__",
    "AppSettings",
    "ScenarioConfig",
    "get_settings",
    "load_run_config",
    "TrilinError",
]
