"""
Normal-mode analysis of a linear three-ion crystal.

The N = 3 crystal is fully analytic: equilibrium spacing, mode frequencies
and eigenvectors all have closed forms, so no equilibrium or Hessian solver
is involved.
"""

import logging
import math
from functools import lru_cache
from typing import Optional

import numpy as np
from scipy.optimize import bisect

from ..shared import ComplexFrequency, rad_s_to_khz
from .constants import (
    ATOMIC_MASS_UNIT,
    ELEMENTARY_CHARGE,
    EPSILON_0,
    HBAR,
    YB171_MASS_U,
)
from .types import (
    RADIAL_ZIGZAG_FACTOR,
    ModeSystem,
    ModeTable,
    TrapConfig,
    closed_form_vectors,
)

logger = logging.getLogger(__name__)

AXIAL_ZIGZAG_FACTOR = 29.0 / 5.0
RESONANCE_XTOL = 1e-12


def ion_spacing(trap: TrapConfig) -> float:
    """
    Distance between neighboring ions, z0 = (5 e^2 / 16 pi eps0 m wz^2)^(1/3).

    Args:
        trap: Trap configuration

    Returns:
        Ion spacing in meters
    """
    numerator = 5.0 * trap.charge ** 2
    denominator = 16.0 * math.pi * EPSILON_0 * trap.mass * trap.omega_z ** 2
    return (numerator / denominator) ** (1.0 / 3.0)


def _radial_frequencies(omega_r: float, omega_z: float, axis: str) -> np.ndarray:
    tilt_sq = omega_r ** 2 - omega_z ** 2
    zigzag_sq = omega_r ** 2 - RADIAL_ZIGZAG_FACTOR * omega_z ** 2
    if zigzag_sq < 0 or tilt_sq < 0:
        raise ComplexFrequency(
            f"{axis}-radial zigzag mode frequency is imaginary "
            f"(omega_{axis}^2 < (12/5) omega_z^2)",
            mode=f"{axis}-radial zigzag",
        )
    return np.array([omega_r, math.sqrt(tilt_sq), math.sqrt(zigzag_sq)])


def normal_modes(trap: TrapConfig, strict_y: bool = True) -> ModeTable:
    """
    Closed-form normal modes along all three axes.

    Axial: {wz, sqrt(3) wz, sqrt(29/5) wz}. Radial with single-ion frequency
    wr: {wr, sqrt(wr^2 - wz^2), sqrt(wr^2 - 12 wz^2 / 5)}. The y axis never
    couples to the simulated modes. With `strict_y` an unstable y axis raises
    like the x axis; otherwise its frequencies are reported as NaN.

    Raises:
        ComplexFrequency: If the x-radial zigzag mode is unstable, or the
            y-radial one while `strict_y` is set
    """
    omega_z = trap.omega_z
    axial = np.array(
        [omega_z, math.sqrt(3.0) * omega_z, math.sqrt(AXIAL_ZIGZAG_FACTOR) * omega_z]
    )
    radial_x = _radial_frequencies(trap.omega_x, omega_z, "x")
    try:
        radial_y = _radial_frequencies(trap.omega_y, omega_z, "y")
    except ComplexFrequency:
        if strict_y:
            raise
        logger.warning("y-radial modes unstable for this trap; reporting NaN")
        radial_y = np.full(3, np.nan)

    vectors = closed_form_vectors()
    return ModeTable(
        frequencies={"x": radial_x, "y": radial_y, "z": axial},
        vectors={"x": vectors.copy(), "y": vectors.copy(), "z": vectors.copy()},
    )


def _resonance_residual(r: float) -> float:
    radial_tilt = math.sqrt(max(0.0, 1.0 - r * r))
    radial_zigzag = math.sqrt(max(0.0, 1.0 - RADIAL_ZIGZAG_FACTOR * r * r))
    return math.sqrt(AXIAL_ZIGZAG_FACTOR) * r - radial_tilt - radial_zigzag


def _resonance_slope(r: float) -> float:
    return (
        math.sqrt(AXIAL_ZIGZAG_FACTOR)
        + r / math.sqrt(1.0 - r * r)
        + RADIAL_ZIGZAG_FACTOR * r / math.sqrt(1.0 - RADIAL_ZIGZAG_FACTOR * r * r)
    )


@lru_cache(maxsize=1)
def resonance_ratio() -> float:
    """
    Ratio r = wz / wx at which the axial zigzag frequency equals the sum of
    the two x-radial tilt and zigzag frequencies.

    Bisection on (0, sqrt(5/12)) to a bracket of 1e-12, then one Newton step.
    """
    lower, upper = 0.0, math.sqrt(1.0 / RADIAL_ZIGZAG_FACTOR)
    f_lower, f_upper = _resonance_residual(lower), _resonance_residual(upper)
    assert f_lower < 0.0 < f_upper, "resonance bracket lost its sign change"

    root = bisect(_resonance_residual, lower, upper, xtol=RESONANCE_XTOL)
    polished = root - _resonance_residual(root) / _resonance_slope(root)
    if 0.0 < polished < upper and abs(_resonance_residual(polished)) <= abs(
        _resonance_residual(root)
    ):
        root = polished
    logger.debug(f"Resonance ratio wz/wx = {root:.15f}")
    return float(root)


def coupling_rate(trap: TrapConfig, modes: ModeTable) -> float:
    """
    Trilinear coupling rate xi = 9 wz^2 sqrt(hbar / m wa wb wc) / (5 z0).

    Args:
        trap: Trap configuration
        modes: Normal modes of that trap

    Returns:
        Coupling rate in rad/s
    """
    omega_a, omega_b, omega_c = modes.coupled_frequencies()
    if min(omega_a, omega_b, omega_c) <= 0:
        raise ComplexFrequency("Coupled mode frequencies must be real and positive")
    z0 = ion_spacing(trap)
    return (
        9.0
        * trap.omega_z ** 2
        * math.sqrt(HBAR / (trap.mass * omega_a * omega_b * omega_c))
        / (5.0 * z0)
    )


def build_mode_system(
    trap: TrapConfig, delta_override: Optional[float] = None
) -> ModeSystem:
    """
    Bundle the coupled-mode frequencies, coupling rate and ion spacing.

    With `delta_override` the radial tilt frequency is moved so that the
    detuning equals the override exactly; the coupling rate always comes
    from the unshifted normal modes.

    Raises:
        ComplexFrequency: Propagated from normal_modes
    """
    table = normal_modes(trap, strict_y=False)
    omega_a, omega_b, omega_c = table.coupled_frequencies()
    if delta_override is not None:
        omega_b = omega_a - omega_c - delta_override
        logger.debug(
            f"Radial tilt moved to {rad_s_to_khz(omega_b):.3f} kHz "
            f"for delta = {rad_s_to_khz(delta_override):.3f} kHz"
        )
    return ModeSystem(
        omega_a=omega_a,
        omega_b=omega_b,
        omega_c=omega_c,
        xi=coupling_rate(trap, table),
        z0=ion_spacing(trap),
    )


def resonant_trap(
    omega_z: float,
    mass_u: float = YB171_MASS_U,
    charge_e: float = 1.0,
    omega_y: Optional[float] = None,
) -> TrapConfig:
    """Trap with wx = wz / resonance_ratio(), i.e. exactly on resonance."""
    omega_x = omega_z / resonance_ratio()
    return TrapConfig(
        mass=mass_u * ATOMIC_MASS_UNIT,
        charge=charge_e * ELEMENTARY_CHARGE,
        omega_x=omega_x,
        omega_y=omega_y if omega_y is not None else omega_x,
        omega_z=omega_z,
    )


def mode_report(
    trap: TrapConfig, delta_override: Optional[float] = None
) -> list[dict[str, float | str]]:
    """
    Rows describing the coupled-mode system in SI units and display units.

    Frequencies display in kHz of ordinary frequency, the spacing in um.
    """
    system = build_mode_system(trap, delta_override)
    rows: list[dict[str, float | str]] = []
    for name in ("omega_a", "omega_b", "omega_c", "delta", "xi"):
        value = getattr(system, name)
        rows.append(
            {
                "quantity": name,
                "si_value": value,
                "si_unit": "rad/s",
                "value": rad_s_to_khz(value),
                "unit": "kHz",
            }
        )
    rows.append(
        {
            "quantity": "z0",
            "si_value": system.z0,
            "si_unit": "m",
            "value": system.z0 * 1e6,
            "unit": "um",
        }
    )
    return rows
