"""
Shared utilities for trilin.

Common utility functions used across multiple modules.
"""

import hashlib
import logging
import math
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

from .exceptions import ConfigurationError

TWO_PI = 2.0 * math.pi


def setup_logging(level: str = "INFO", log_file: Optional[str] = None) -> logging.Logger:
    """
    Set up structured logging for the application.

    Args:
        level: Logging level
        log_file: Optional log file path

    Returns:
        Configured logger instance

    Raises:
        ConfigurationError: If the level name is not a logging level
    """
    numeric_level = logging.getLevelName(level.upper())
    if not isinstance(numeric_level, int):
        raise ConfigurationError(f"Unknown log level '{level}'", fields=["log_level"])

    handlers: list[logging.Handler] = [logging.StreamHandler()]
    if log_file:
        handlers.append(logging.FileHandler(log_file))

    logging.basicConfig(
        level=numeric_level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=handlers,
        force=True,
    )

    return logging.getLogger("trilin")


def khz_to_rad_s(value_khz: float) -> float:
    """Convert an ordinary frequency in kHz to angular frequency in rad/s."""
    return TWO_PI * value_khz * 1e3


def rad_s_to_khz(value_rad_s: float) -> float:
    """Convert an angular frequency in rad/s to ordinary frequency in kHz."""
    return value_rad_s / TWO_PI / 1e3


def rad_s_to_hz(value_rad_s: float) -> float:
    """Convert an angular frequency in rad/s to ordinary frequency in Hz."""
    return value_rad_s / TWO_PI


def format_float(value: float) -> str:
    """
    Format a float as its shortest round-trip decimal representation.

    Integers stored as floats keep a trailing ".0" so column types stay
    stable across rows.
    """
    return repr(float(value))


def parse_int_triple(text: str) -> tuple[int, int, int]:
    """
    Parse "a,b,c" into three integers.

    Raises:
        ValueError: If the text does not hold exactly three integers
    """
    parts = [part.strip() for part in text.split(",") if part.strip()]
    if len(parts) != 3:
        raise ValueError(f"Expected three comma-separated integers, got '{text}'")
    return int(parts[0]), int(parts[1]), int(parts[2])


def calculate_file_hash(path: Union[str, Path]) -> str:
    """
    Calculate the SHA-256 hash of a file's contents.

    Args:
        path: File to hash

    Returns:
        Hexadecimal hash string
    """
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


def ensure_directory(path: Union[str, Path]) -> Path:
    """
    Ensure directory exists, creating it if necessary.

    Args:
        path: Directory path

    Returns:
        Path object for the directory
    """
    path_obj = Path(path)
    path_obj.mkdir(parents=True, exist_ok=True)
    return path_obj


def linspace_grid(start: float, stop: float, points: int) -> list[float]:
    """Evenly spaced grid including both endpoints, as Python floats."""
    if points < 1:
        raise ValueError("Grid needs at least one point")
    if points == 1:
        return [float(start)]
    step = (stop - start) / (points - 1)
    return [start + i * step for i in range(points)]


def is_strictly_increasing(values: Sequence[float]) -> bool:
    """Check that a sequence is strictly increasing."""
    return all(b > a for a, b in zip(values, values[1:]))


def summarize_leakage(values: Iterable[float]) -> dict[str, float]:
    """Max and final truncation leakage of a series."""
    series = [float(v) for v in values]
    if not series:
        return {"max": 0.0, "final": 0.0}
    return {"max": max(series), "final": series[-1]}
