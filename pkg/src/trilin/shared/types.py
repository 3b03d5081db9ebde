"""
Shared type definitions for trilin.

Defines common enums and aliases used across multiple modules.
"""

from enum import Enum
from typing import Any, Dict, Union

import numpy as np
import numpy.typing as npt


class Mode(str, Enum):
    """The three coupled motional modes."""
    A = "a"  # axial zigzag
    B = "b"  # radial tilt
    C = "c"  # radial zigzag

    @property
    def position(self) -> int:
        return "abc".index(self.value)


class LadderDirection(str, Enum):
    """Direction of a single-mode ladder operator."""
    RAISE = "raise"
    LOWER = "lower"


class SidebandKind(str, Enum):
    """Motional sideband driven for detection."""
    RED = "red"
    BLUE = "blue"


class PropagatorMethod(str, Enum):
    """Time propagation back ends."""
    DENSE = "dense"
    KRYLOV = "krylov"


class FitModel(str, Enum):
    """Phonon distribution models used for fits."""
    POISSON = "poisson"
    GEOMETRIC = "geometric"


class TomographyMethod(str, Enum):
    """Sideband signal inversion methods."""
    NNLS = "nnls"
    FOURIER = "fourier"


class ScenarioName(str, Enum):
    """Scripted experiment reproductions."""
    AVOIDED_CROSSING = "avoided-crossing"
    EXCHANGE = "exchange"
    JAYNES_CUMMINGS = "jc"
    PDC = "pdc"


# Type aliases for common patterns
FloatArray = npt.NDArray[np.float64]
ComplexArray = npt.NDArray[np.complex128]
IntArray = npt.NDArray[np.int64]
Ket = tuple[int, int, int]
SectorLabel = tuple[int, int]
ModeLike = Union[Mode, str]
JSONData = Dict[str, Any]


def as_mode(mode: ModeLike) -> Mode:
    """Coerce a mode label ("a", "b", "c" or Mode) to Mode."""
    return mode if isinstance(mode, Mode) else Mode(str(mode).lower())
