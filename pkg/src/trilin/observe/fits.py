"""
Distribution and sinusoid fits.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from ..hilbert import PhononDistribution
from ..shared import FitModel, FloatArray

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class FitResult:
    """Model comparison of a phonon distribution."""

    model: FitModel
    nbar: float
    residual_norm: float
    residuals: FloatArray = field(repr=False)


def _fit(distribution: PhononDistribution, model: FitModel) -> FitResult:
    normalized = distribution.normalized()
    nbar = max(0.0, normalized.mean)
    if model is FitModel.POISSON:
        reference = PhononDistribution.poisson(nbar, normalized.n_max, normalized.mode)
    else:
        reference = PhononDistribution.geometric(nbar, normalized.n_max, normalized.mode)
    residuals = normalized.probabilities - reference.probabilities
    return FitResult(
        model=model,
        nbar=nbar,
        residual_norm=float(np.sum(np.abs(residuals))),
        residuals=residuals,
    )


def fit_poisson(distribution: PhononDistribution) -> FitResult:
    """Compare against the Poisson distribution of the same mean."""
    return _fit(distribution, FitModel.POISSON)


def fit_geometric(distribution: PhononDistribution) -> FitResult:
    """Compare against the thermal distribution nbar^n / (1+nbar)^(n+1) of the same mean."""
    return _fit(distribution, FitModel.GEOMETRIC)


@dataclass(frozen=True)
class SinusoidFit:
    """y(t) = offset + amplitude cos(omega t + phase)."""

    omega: float
    offset: float
    amplitude: float
    phase: float
    rms: float

    @property
    def frequency_hz(self) -> float:
        return self.omega / (2.0 * math.pi)


def _linear_sinusoid(times: FloatArray, values: FloatArray, omega: float) -> tuple[FloatArray, float]:
    design = np.column_stack([np.ones_like(times), np.cos(omega * times), np.sin(omega * times)])
    coefficients, *_ = np.linalg.lstsq(design, values, rcond=None)
    residual = values - design @ coefficients
    return coefficients, float(np.dot(residual, residual))


def fit_sinusoid(
    times: Sequence[float],
    values: Sequence[float],
    omega_guess: float,
    span: float = 0.05,
    grid_points: int = 201,
) -> SinusoidFit:
    """
    Fit a single sinusoid near `omega_guess`.

    A grid over [w(1-span), w(1+span)] solves offset and quadratures by
    linear least squares at each w; the best grid cell is then refined with
    a bounded scalar minimization.
    """
    t = np.asarray(times, dtype=float)
    y = np.asarray(values, dtype=float)
    if len(t) < 4 or t.shape != y.shape:
        raise ValueError("Need at least four matching samples for a sinusoid fit")
    if omega_guess <= 0 or not 0 < span < 1:
        raise ValueError("Frequency guess must be positive and span in (0, 1)")

    grid = np.linspace(omega_guess * (1 - span), omega_guess * (1 + span), grid_points)
    costs = np.array([_linear_sinusoid(t, y, omega)[1] for omega in grid])
    best = int(np.argmin(costs))
    step = grid[1] - grid[0]
    lower = grid[max(best - 1, 0)]
    upper = grid[min(best + 1, grid_points - 1)]
    if lower == upper:
        lower, upper = grid[best] - step, grid[best] + step

    refined = minimize_scalar(
        lambda omega: _linear_sinusoid(t, y, omega)[1],
        bounds=(lower, upper),
        method="bounded",
        options={"xatol": omega_guess * 1e-13},
    )
    omega = float(refined.x)
    (offset, cosine, sine), cost = _linear_sinusoid(t, y, omega)
    logger.debug(f"Sinusoid fit: omega = {omega:.10g} rad/s, rms = {math.sqrt(cost / len(t)):.3e}")
    return SinusoidFit(
        omega=omega,
        offset=float(offset),
        amplitude=float(math.hypot(cosine, sine)),
        phase=float(math.atan2(-sine, cosine)),
        rms=math.sqrt(cost / len(t)),
    )
