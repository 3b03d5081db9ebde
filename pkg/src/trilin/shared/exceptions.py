"""
Custom exceptions for trilin.

Defines application-specific exceptions with error codes, context and the
process exit code the CLI maps each family to.
"""

from typing import Any, Dict, Optional


class TrilinError(Exception):
    """
    Base exception for all trilin errors.

    Provides consistent error handling with error codes and context.
    """

    exit_code: int = 1

    def __init__(
        self,
        message: str,
        error_code: Optional[str] = None,
        context: Optional[Dict[str, Any]] = None
    ):
        super().__init__(message)
        self.message = message
        self.error_code = error_code or self.__class__.__name__
        self.context = context or {}

    def to_dict(self) -> Dict[str, Any]:
        """Convert exception to dictionary for manifests and diagnostics."""
        return {
            "error": self.error_code,
            "message": self.message,
            "context": self.context
        }


class ConfigurationError(TrilinError):
    """Raised when configuration is invalid or missing."""

    exit_code = 2

    def __init__(self, message: str, fields: Optional[list[str]] = None):
        super().__init__(message, "CONFIGURATION_ERROR")
        if fields:
            self.context["fields"] = fields


class PhysicsError(TrilinError):
    """Base class for errors raised by the physical model."""

    exit_code = 3


class ComplexFrequency(PhysicsError):
    """Raised when a normal mode frequency would be imaginary."""

    def __init__(self, message: str, mode: Optional[str] = None):
        super().__init__(message, "COMPLEX_FREQUENCY")
        if mode:
            self.context["mode"] = mode


class DimensionCap(PhysicsError):
    """Raised when a truncated Fock space exceeds the dimension cap."""

    def __init__(self, dimension: int, cap: int):
        super().__init__(
            f"Truncated space dimension {dimension} exceeds cap {cap}",
            "DIMENSION_CAP",
            {"dimension": dimension, "cap": cap},
        )


class OutOfTruncation(PhysicsError):
    """Raised when a Fock state lies outside the truncation."""

    def __init__(self, ket: tuple[int, int, int], cutoffs: tuple[int, int, int]):
        super().__init__(
            f"Ket |{ket[0]},{ket[1]},{ket[2]}> outside cutoffs {cutoffs}",
            "OUT_OF_TRUNCATION",
            {"ket": list(ket), "cutoffs": list(cutoffs)},
        )


class TruncationLeak(PhysicsError):
    """Raised when a state loses too much weight to the truncation."""

    def __init__(self, message: str, leakage: Optional[float] = None):
        super().__init__(message, "TRUNCATION_LEAK")
        if leakage is not None:
            self.context["leakage"] = leakage


class ConvergenceFailure(PhysicsError):
    """Raised when the Krylov propagator cannot meet its tolerance."""

    def __init__(self, message: str, residual: Optional[float] = None):
        super().__init__(message, "CONVERGENCE_FAILURE")
        if residual is not None:
            self.context["residual"] = residual


class BasisMismatch(PhysicsError):
    """Raised when operands live on different sector bases."""

    def __init__(self, message: str = "Operands are defined on different bases"):
        super().__init__(message, "BASIS_MISMATCH")


class ReconstructionError(TrilinError):
    """Base class for tomography inversion errors."""

    exit_code = 4


class IllConditioned(ReconstructionError):
    """Raised when the tomography design matrix is too ill-conditioned."""

    def __init__(self, condition_number: float, limit: float):
        super().__init__(
            f"Design matrix condition number {condition_number:.3e} exceeds {limit:.0e}; "
            "extend the time window or reduce n_cut",
            "ILL_CONDITIONED",
            {"condition_number": condition_number, "limit": limit},
        )


class OutputError(TrilinError):
    """Raised when writing result files fails."""

    exit_code = 5

    def __init__(self, message: str, path: Optional[str] = None):
        super().__init__(message, "OUTPUT_ERROR")
        if path:
            self.context["path"] = path
