"""
Sideband Rabi signals of a phonon distribution.

A blue sideband pulse of length t flips the qubit with probability
sum_n p_n sin^2(sqrt(n+1) W0 t / 2); the red sideband uses sqrt(n) and
leaves n = 0 dark. An optional envelope damps term n at
gamma_n = gamma0 (n+1)^0.7.
"""

import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..hilbert import PhononDistribution
from ..shared import FloatArray, Mode, SidebandKind, is_strictly_increasing

logger = logging.getLogger(__name__)

ENVELOPE_EXPONENT = 0.7
PROBABILITY_SLACK = 1e-12


@dataclass(frozen=True, eq=False)
class SidebandSignal:
    """Qubit flip probability versus sideband pulse length."""

    kind: SidebandKind
    mode: Mode
    omega0: float
    times: FloatArray = field(repr=False)
    probabilities: FloatArray = field(repr=False)
    gamma0: float = 0.0

    def __post_init__(self) -> None:
        if self.omega0 <= 0:
            raise ValueError("Sideband Rabi frequency must be positive")
        if self.gamma0 < 0:
            raise ValueError("Envelope decay rate must be non-negative")
        if self.times.shape != self.probabilities.shape or self.times.ndim != 1:
            raise ValueError("Times and probabilities must be matching 1-D arrays")
        if not is_strictly_increasing(list(self.times)):
            raise ValueError("Signal times must be strictly increasing")
        if np.any(self.probabilities < -PROBABILITY_SLACK) or np.any(
            self.probabilities > 1 + PROBABILITY_SLACK
        ):
            raise ValueError("Signal probabilities must lie in [0, 1]")

    @property
    def sample_spacing(self) -> float:
        """Largest gap between consecutive samples."""
        return float(np.max(np.diff(self.times))) if len(self.times) > 1 else 0.0


def sideband_rates(kind: SidebandKind, n: FloatArray) -> FloatArray:
    """Relative Rabi rates sqrt(n+1) (blue) or sqrt(n) (red)."""
    return np.sqrt(n + 1.0) if kind is SidebandKind.BLUE else np.sqrt(n)


def envelope_rates(gamma0: float, n: FloatArray) -> FloatArray:
    return gamma0 * (n + 1.0) ** ENVELOPE_EXPONENT


def basis_functions(
    kind: SidebandKind, omega0: float, times: FloatArray, n: FloatArray, gamma0: float = 0.0
) -> FloatArray:
    """
    Per-n flip probabilities (1 - e^{-gamma_n t} cos(rate_n W0 t)) / 2 as columns.
    """
    phases = np.outer(times, sideband_rates(kind, n) * omega0)
    decay = np.exp(-np.outer(times, envelope_rates(gamma0, n)))
    return 0.5 * (1.0 - decay * np.cos(phases))


def synthesize_sideband(
    distribution: PhononDistribution,
    kind: SidebandKind | str,
    omega0: float,
    times: Sequence[float],
    gamma0: float = 0.0,
) -> SidebandSignal:
    """
    Noiseless sideband signal of a phonon distribution.

    Args:
        distribution: Phonon-number probabilities of the probed mode
        kind: red or blue sideband
        omega0: Sideband Rabi frequency of n = 0 (blue) in rad/s
        times: Strictly increasing pulse lengths in s
        gamma0: Envelope decay rate in 1/s; 0 disables the envelope
    """
    kind = SidebandKind(kind)
    grid = np.asarray(times, dtype=float)
    n = np.arange(len(distribution.probabilities), dtype=float)
    signal = basis_functions(kind, omega0, grid, n, gamma0) @ distribution.probabilities
    return SidebandSignal(
        kind=kind,
        mode=distribution.mode,
        omega0=omega0,
        times=grid,
        probabilities=np.clip(signal, 0.0, 1.0),
        gamma0=gamma0,
    )


def contrast_envelope(times: Sequence[float], tau: float) -> FloatArray:
    """Phenomenological contrast decay e^{-t/tau}."""
    if tau <= 0:
        raise ValueError("Decay time must be positive")
    return np.exp(-np.asarray(times, dtype=float) / tau)


def probe_spectrum(
    eigenvalues: Sequence[float],
    overlaps: Sequence[float],
    probe_detunings: Sequence[float],
    omega_probe: float,
    duration: float,
) -> FloatArray:
    """
    Blue-sideband excitation spectrum of hybridized single-excitation states.

    Eigenstate k (energy E_k in the rotating frame) is driven with Rabi
    frequency W |<k|100>| and contributes a Rabi lineshape centered on E_k.

    Args:
        eigenvalues: Eigenenergies of the sector in rad/s
        overlaps: <k|100> for each eigenstate
        probe_detunings: Probe detunings from the bare sideband in rad/s
        omega_probe: Bare sideband Rabi frequency in rad/s
        duration: Probe pulse length in s
    """
    energies = np.asarray(eigenvalues, dtype=float)
    couplings = omega_probe * np.abs(np.asarray(overlaps, dtype=float))
    if energies.shape != couplings.shape:
        raise ValueError("Need one overlap per eigenvalue")
    if duration <= 0 or omega_probe <= 0:
        raise ValueError("Probe duration and Rabi frequency must be positive")
    detuning = np.asarray(probe_detunings, dtype=float)[:, None] - energies[None, :]
    generalized = np.sqrt(couplings[None, :] ** 2 + detuning ** 2)
    with np.errstate(invalid="ignore", divide="ignore"):
        weight = np.where(generalized > 0, couplings[None, :] ** 2 / generalized ** 2, 0.0)
    lines = weight * np.sin(0.5 * generalized * duration) ** 2
    return np.clip(lines.sum(axis=1), 0.0, 1.0)
