"""
Shared module for trilin.

Provides common utilities, types, and exceptions used across the application.
"""

from .exceptions import *
from .types import *
from .utils import *

__all__ = [
    # Exceptions
    "TrilinError",
    "ConfigurationError",
    "PhysicsError",
    "ComplexFrequency",
    "DimensionCap",
    "OutOfTruncation",
    "TruncationLeak",
    "ConvergenceFailure",
    "BasisMismatch",
    "ReconstructionError",
    "IllConditioned",
    "OutputError",

    # Types
    "Mode",
    "LadderDirection",
    "SidebandKind",
    "PropagatorMethod",
    "FitModel",
    "TomographyMethod",
    "ScenarioName",
    "FloatArray",
    "ComplexArray",
    "IntArray",
    "Ket",
    "SectorLabel",
    "ModeLike",
    "JSONData",
    "as_mode",

    # Utils
    "TWO_PI",
    "setup_logging",
    "khz_to_rad_s",
    "rad_s_to_khz",
    "rad_s_to_hz",
    "format_float",
    "parse_int_triple",
    "calculate_file_hash",
    "ensure_directory",
    "linspace_grid",
    "is_strictly_increasing",
    "summarize_leakage",
]
