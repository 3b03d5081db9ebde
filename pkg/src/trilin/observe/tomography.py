"""
Phonon-number tomography: inverting a sideband signal into p_n.
"""

import logging
from dataclasses import dataclass

import numpy as np
from scipy.integrate import trapezoid
from scipy.optimize import nnls

from ..hilbert import PhononDistribution
from ..shared import IllConditioned, SidebandKind, TomographyMethod
from .signals import SidebandSignal, basis_functions, envelope_rates, sideband_rates

logger = logging.getLogger(__name__)

CONDITION_LIMIT = 1e8
# Weight of the sum-to-one row relative to the design norm.
NORMALIZATION_WEIGHT = 1e3
SUM_SLACK = 1e-12


@dataclass(frozen=True)
class TomographyResult:
    """Reconstructed distribution with inversion diagnostics."""

    distribution: PhononDistribution
    residual_norm: float
    condition_number: float
    nyquist_ok: bool
    method: TomographyMethod
    kind: SidebandKind


def nyquist_limit(omega0: float, n_cut: int) -> float:
    """Largest sample spacing resolving the fastest component, pi / (sqrt(n_cut+1) W0)."""
    return float(np.pi / (np.sqrt(n_cut + 1.0) * omega0))


def _unknowns(kind: SidebandKind, n_cut: int) -> np.ndarray:
    # The red sideband never sees n = 0; p_0 follows from normalization.
    start = 1 if kind is SidebandKind.RED else 0
    return np.arange(start, n_cut + 1, dtype=float)


def _check_condition(design: np.ndarray) -> float:
    condition = float(np.linalg.cond(design))
    if not np.isfinite(condition) or condition > CONDITION_LIMIT:
        raise IllConditioned(condition, CONDITION_LIMIT)
    return condition


def _solve_nnls(design: np.ndarray, target: np.ndarray) -> np.ndarray:
    probabilities, _ = nnls(design, target)
    if probabilities.sum() > 1.0 + SUM_SLACK:
        weight = NORMALIZATION_WEIGHT * np.linalg.norm(design)
        augmented = np.vstack([design, weight * np.ones(design.shape[1])])
        probabilities, _ = nnls(augmented, np.append(target, weight))
    return probabilities


def _solve_fourier(signal: SidebandSignal, n: np.ndarray) -> tuple[np.ndarray, float]:
    """
    Project 1 - 2P(t) onto each cos(rate_n W0 t) over the sampled window.

    1 - 2P(t) = (1 - sum p) + sum_n p_n e^{-gamma_n t} cos(rate_n W0 t). Each
    projection is divided by the self-overlap of its own component, so finite
    windows leak weight between the incommensurate rates. The window mean
    fixes the total sum p.
    """
    times = signal.times
    target = 1.0 - 2.0 * signal.probabilities
    phases = np.outer(times, sideband_rates(signal.kind, n) * signal.omega0)
    decay = np.exp(-np.outer(times, envelope_rates(signal.gamma0, n)))
    components = decay * np.cos(phases)
    condition = _check_condition(np.column_stack([np.ones_like(times), components]))

    cosines = np.cos(phases)
    projections = trapezoid(target[:, None] * cosines, times, axis=0)
    self_overlaps = trapezoid(components * cosines, times, axis=0)
    coefficients = np.clip(projections / self_overlaps, 0.0, None)

    span = times[-1] - times[0]
    total = float(np.clip(1.0 - trapezoid(target, times) / span, 0.0, 1.0))
    if coefficients.sum() > 0.0:
        coefficients *= total / coefficients.sum()
    return coefficients, condition


def reconstruct_with_diagnostics(
    signal: SidebandSignal,
    n_cut: int,
    method: TomographyMethod | str = TomographyMethod.NNLS,
) -> TomographyResult:
    """
    Invert a sideband signal into phonon-number probabilities p_0..p_n_cut.

    Raises:
        IllConditioned: If the design matrix condition number exceeds 1e8
    """
    method = TomographyMethod(method)
    if n_cut < 0:
        raise ValueError("n_cut must be non-negative")
    n = _unknowns(signal.kind, n_cut)

    limit = nyquist_limit(signal.omega0, n_cut)
    nyquist_ok = signal.sample_spacing <= limit
    if not nyquist_ok:
        logger.warning(
            f"Sample spacing {signal.sample_spacing:.3e} s exceeds the Nyquist limit "
            f"{limit:.3e} s for n_cut = {n_cut}"
        )

    if len(n) == 0:
        solved, condition = np.zeros(0), 1.0
    elif method is TomographyMethod.NNLS:
        design = basis_functions(signal.kind, signal.omega0, signal.times, n, signal.gamma0)
        condition = _check_condition(design)
        solved = _solve_nnls(design, signal.probabilities)
    else:
        solved, condition = _solve_fourier(signal, n)

    if signal.kind is SidebandKind.RED:
        probabilities = np.concatenate([[max(0.0, 1.0 - solved.sum())], solved])
    else:
        probabilities = solved
    distribution = PhononDistribution(signal.mode, probabilities)

    fitted = basis_functions(
        signal.kind, signal.omega0, signal.times, np.arange(n_cut + 1, dtype=float), signal.gamma0
    ) @ probabilities
    residual_norm = float(np.linalg.norm(fitted - signal.probabilities))
    logger.debug(
        f"{method.value} tomography of mode {signal.mode.value}: cond = {condition:.3e}, "
        f"residual = {residual_norm:.3e}"
    )
    return TomographyResult(
        distribution=distribution,
        residual_norm=residual_norm,
        condition_number=condition,
        nyquist_ok=nyquist_ok,
        method=method,
        kind=signal.kind,
    )


def reconstruct_distribution(
    signal: SidebandSignal,
    n_cut: int,
    method: TomographyMethod | str = TomographyMethod.NNLS,
) -> PhononDistribution:
    """Reconstructed distribution only; see reconstruct_with_diagnostics."""
    return reconstruct_with_diagnostics(signal, n_cut, method).distribution
