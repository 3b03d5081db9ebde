"""
Value types for the normal-mode analysis of the three-ion crystal.
"""

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..shared import ComplexFrequency, FloatArray, khz_to_rad_s, rad_s_to_khz
from .constants import ATOMIC_MASS_UNIT, ELEMENTARY_CHARGE, YB171_MASS_U

Axis = Literal["x", "y", "z"]

# Trap used throughout the reference measurements, kHz of ordinary frequency.
REFERENCE_TRAP_KHZ = (1056.0, 976.0, 587.0)
RADIAL_ZIGZAG_FACTOR = 12.0 / 5.0


class TrapConfig(BaseModel):
    """
    Ion species and single-ion trap angular frequencies.

    Validation rejects traps whose x-radial zigzag mode would have an
    imaginary frequency.
    """

    model_config = ConfigDict(frozen=True)

    mass: float = Field(..., description="Ion mass in kg")
    charge: float = Field(..., description="Ion charge in C")
    omega_x: float = Field(..., description="x-radial trap frequency in rad/s")
    omega_y: float = Field(..., description="y-radial trap frequency in rad/s")
    omega_z: float = Field(..., description="Axial trap frequency in rad/s")

    @field_validator('mass')
    @classmethod
    def validate_mass(cls, v: float) -> float:
        if not v > 0:
            raise ValueError('Ion mass must be positive')
        return v

    @field_validator('charge')
    @classmethod
    def validate_charge(cls, v: float) -> float:
        if v == 0:
            raise ValueError('Ion charge must be nonzero')
        return v

    @field_validator('omega_x', 'omega_y', 'omega_z')
    @classmethod
    def validate_frequency(cls, v: float) -> float:
        if not (v > 0 and math.isfinite(v)):
            raise ValueError('Trap frequencies must be positive and finite')
        return v

    @model_validator(mode='after')
    def validate_linear_crystal(self) -> "TrapConfig":
        if self.omega_x ** 2 <= RADIAL_ZIGZAG_FACTOR * self.omega_z ** 2:
            raise ComplexFrequency(
                "x-radial zigzag mode is unstable: omega_x^2 must exceed "
                f"(12/5) omega_z^2 (omega_x/omega_z = {self.omega_x / self.omega_z:.4f}, "
                f"need > {math.sqrt(RADIAL_ZIGZAG_FACTOR):.4f})",
                mode="x-radial zigzag",
            )
        return self

    @classmethod
    def from_khz(
        cls,
        fx_khz: float,
        fy_khz: float,
        fz_khz: float,
        mass_u: float = YB171_MASS_U,
        charge_e: float = 1.0,
    ) -> "TrapConfig":
        """Build a trap from ordinary frequencies in kHz and ion mass in u."""
        return cls(
            mass=mass_u * ATOMIC_MASS_UNIT,
            charge=charge_e * ELEMENTARY_CHARGE,
            omega_x=khz_to_rad_s(fx_khz),
            omega_y=khz_to_rad_s(fy_khz),
            omega_z=khz_to_rad_s(fz_khz),
        )

    @classmethod
    def reference_default(cls) -> "TrapConfig":
        """Three 171Yb+ ions at 2pi x (1056, 976, 587) kHz."""
        return cls.from_khz(*REFERENCE_TRAP_KHZ)


@dataclass(frozen=True)
class ModeTable:
    """
    Normal modes per axis.

    `frequencies[axis]` holds (center-of-mass, tilt, zigzag) angular
    frequencies; `vectors[axis]` holds the matching unit eigenvectors as rows.
    """

    frequencies: dict[str, FloatArray]
    vectors: dict[str, FloatArray]

    @property
    def axial_zigzag(self) -> float:
        return float(self.frequencies["z"][2])

    @property
    def radial_tilt(self) -> float:
        return float(self.frequencies["x"][1])

    @property
    def radial_zigzag(self) -> float:
        return float(self.frequencies["x"][2])

    def coupled_frequencies(self) -> tuple[float, float, float]:
        """(omega_a, omega_b, omega_c) of the three coupled modes."""
        return self.axial_zigzag, self.radial_tilt, self.radial_zigzag


class ModeSystem(BaseModel):
    """The three coupled modes with detuning, coupling rate and ion spacing."""

    model_config = ConfigDict(frozen=True)

    omega_a: float = Field(..., description="Axial zigzag frequency in rad/s")
    omega_b: float = Field(..., description="Radial tilt frequency in rad/s")
    omega_c: float = Field(..., description="Radial zigzag frequency in rad/s")
    xi: float = Field(..., description="Trilinear coupling rate in rad/s")
    z0: float = Field(..., description="Neighboring-ion spacing in m")

    @field_validator('xi', 'z0')
    @classmethod
    def validate_positive(cls, v: float) -> float:
        if not v > 0:
            raise ValueError('Coupling rate and ion spacing must be positive')
        return v

    @property
    def delta(self) -> float:
        """Three-mode detuning omega_a - omega_b - omega_c in rad/s."""
        return self.omega_a - self.omega_b - self.omega_c

    def in_khz(self) -> dict[str, float]:
        """Ordinary frequencies in kHz."""
        return {
            "omega_a": rad_s_to_khz(self.omega_a),
            "omega_b": rad_s_to_khz(self.omega_b),
            "omega_c": rad_s_to_khz(self.omega_c),
            "delta": rad_s_to_khz(self.delta),
            "xi": rad_s_to_khz(self.xi),
        }


def closed_form_vectors() -> FloatArray:
    """Center-of-mass, tilt and zigzag eigenvectors as rows."""
    return np.array(
        [
            np.array([1.0, 1.0, 1.0]) / math.sqrt(3.0),
            np.array([-1.0, 0.0, 1.0]) / math.sqrt(2.0),
            np.array([-1.0, 2.0, -1.0]) / math.sqrt(6.0),
        ]
    )
