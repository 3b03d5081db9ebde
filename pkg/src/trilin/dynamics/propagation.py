"""
Time propagation of states under a block-diagonal HamiltonianOp.

Sectors evolve independently, so each block is propagated on its own and
results are written back in sector order. Two back ends:

- dense: cached eigendecomposition of each block, exact up to rounding
- krylov: Lanczos approximation of exp(-iHt)v with adaptive sub-steps
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.linalg import eigh_tridiagonal

from ..hilbert import StateVector, require_same_basis
from ..shared import ComplexArray, ConvergenceFailure, FloatArray, PropagatorMethod
from .hamiltonian import HamiltonianOp, block_norm_bound

logger = logging.getLogger(__name__)

# Blocks below this size are not worth a thread.
PARALLEL_MIN_SECTORS = 8
BREAKDOWN_TOLERANCE = 1e-13


class Propagator(BaseModel):
    """Propagation back end and its accuracy controls."""

    model_config = ConfigDict(frozen=True)

    method: PropagatorMethod = Field(default=PropagatorMethod.DENSE)
    tolerance: float = Field(default=1e-10, gt=0, description="Krylov error budget per evolve call")
    krylov_dim: int = Field(default=30, ge=2, description="Lanczos subspace size")
    max_steps: int = Field(default=100_000, ge=1, description="Krylov sub-step limit")
    threads: Optional[int] = Field(default=None, ge=1, description="Overrides TRILIN_THREADS")

    def worker_count(self) -> int:
        if self.threads is not None:
            return self.threads
        from ..config import get_settings

        return get_settings().threads


def _lanczos(
    diagonal: FloatArray, off: FloatArray, start: ComplexArray, size: int
) -> tuple[ComplexArray, FloatArray, FloatArray, float]:
    """
    Lanczos tridiagonalization with full reorthogonalization.

    Returns:
        Tuple of (basis rows, alphas, betas, next beta); next beta is 0.0 on
        an invariant subspace
    """
    dimension = len(diagonal)
    vectors = np.zeros((size, dimension), dtype=np.complex128)
    alphas = np.zeros(size)
    betas = np.zeros(size)
    vectors[0] = start
    scale = max(block_norm_bound(diagonal, off), 1.0)

    for j in range(size):
        v = vectors[j]
        w = diagonal * v
        if dimension > 1:
            w[:-1] += off * v[1:]
            w[1:] += off * v[:-1]
        alphas[j] = float(np.real(np.vdot(v, w)))
        w -= alphas[j] * v
        if j > 0:
            w -= betas[j - 1] * vectors[j - 1]
        w -= vectors[: j + 1].T @ (vectors[: j + 1].conj() @ w)
        beta = float(np.linalg.norm(w))
        if beta <= BREAKDOWN_TOLERANCE * scale or j + 1 == dimension:
            return vectors[: j + 1], alphas[: j + 1], betas[:j], 0.0
        if j + 1 == size:
            return vectors, alphas, betas[: size - 1], beta
        betas[j] = beta
        vectors[j + 1] = w / beta
    raise AssertionError("unreachable")


def _projected_exponential(alphas: FloatArray, betas: FloatArray, dt: float) -> ComplexArray:
    """exp(-i T dt) e_1 for the Lanczos tridiagonal T."""
    if len(alphas) == 1:
        return np.array([np.exp(-1j * alphas[0] * dt)])
    values, vectors = eigh_tridiagonal(alphas, betas)
    return vectors @ (np.exp(-1j * values * dt) * vectors[0, :])


def _spectral_half_width(diagonal: FloatArray, off: FloatArray) -> float:
    """A quarter of the Gershgorin interval width of a tridiagonal block."""
    radius = np.zeros_like(diagonal)
    if len(off):
        radius[:-1] += np.abs(off)
        radius[1:] += np.abs(off)
    return float(np.max(diagonal + radius) - np.min(diagonal - radius)) / 4.0


def _a_priori_step(rho: float, size: int, tolerance: float, total: float) -> float:
    """
    Largest step whose Lanczos error bound stays within tolerance * dt / total.

    Uses 12 exp(-(rho dt)^2 / m) (e rho dt / m)^m, valid for rho dt <= m / 2,
    where the spectrum lies in an interval of width 4 rho. The bound does not
    depend on the computed Krylov coefficients, so it holds where the
    a posteriori estimate is swamped by rounding.
    """

    def excess(y: float) -> float:
        log_bound = math.log(12.0) - y * y / size + size * (1.0 + math.log(y / size))
        return log_bound - math.log(tolerance * y / (rho * total))

    low, high = 0.0, size / 2.0
    if excess(high) <= 0.0:
        return high / rho
    for _ in range(60):
        middle = 0.5 * (low + high)
        if excess(middle) <= 0.0:
            low = middle
        else:
            high = middle
    return low / rho


def krylov_expm_block(
    diagonal: FloatArray,
    off: FloatArray,
    vector: ComplexArray,
    t: float,
    tolerance: float = 1e-10,
    krylov_dim: int = 30,
    max_steps: int = 100_000,
) -> ComplexArray:
    """
    exp(-i B t) v for one real symmetric tridiagonal block B.

    Each sub-step is accepted when the a posteriori estimate
    beta_m |e_m^T exp(-i T dt) e_1| is within tolerance * dt / t, or when dt
    is no longer than the a priori step of the Lanczos error bound. Either
    way the total error of the call stays within `tolerance`.

    Raises:
        ConvergenceFailure: If max_steps sub-steps do not reach t
    """
    result = np.asarray(vector, dtype=np.complex128).copy()
    norm = float(np.linalg.norm(result))
    if norm == 0.0 or t == 0.0:
        return result

    direction = 1.0 if t > 0 else -1.0
    total = abs(t)
    size = min(krylov_dim, len(diagonal))
    bound = block_norm_bound(diagonal, off)
    rho = _spectral_half_width(diagonal, off)
    if size == len(diagonal) or rho == 0.0:
        # The Krylov space is invariant (or H is a multiple of 1): exact.
        safe = total
    else:
        safe = min(total, _a_priori_step(rho, size, tolerance, total))
    dt = total if bound == 0.0 else min(total, max(safe, 0.25 * size / bound))
    elapsed = 0.0
    steps = 0

    while elapsed < total:
        if steps >= max_steps:
            raise ConvergenceFailure(
                f"Krylov propagation needed more than {max_steps} steps "
                f"(reached t = {elapsed:.6g} of {total:.6g})",
                residual=None,
            )
        norm = float(np.linalg.norm(result))
        vectors, alphas, betas, next_beta = _lanczos(diagonal, off, result / norm, size)
        remaining = total - elapsed
        dt = min(dt, remaining)

        while True:
            coefficients = _projected_exponential(alphas, betas, direction * dt)
            error = norm * next_beta * abs(coefficients[-1])
            budget = tolerance * dt / total
            if error <= budget or dt <= safe:
                break
            dt = max(safe, dt * max(0.2, 0.9 * (budget / error) ** (1.0 / len(alphas))))

        result = norm * (coefficients @ vectors)
        elapsed = total if dt >= remaining else elapsed + dt
        steps += 1
        if error == 0.0:
            dt *= 2.0
        elif error <= budget:
            dt *= min(2.0, 0.9 * (budget / error) ** (1.0 / len(alphas)))
        dt = max(dt, safe)

    logger.debug(f"Krylov block of size {len(diagonal)} finished in {steps} steps")
    return result


def _active_sectors(state: StateVector) -> list[int]:
    weights = state.sector_weights()
    return [int(k) for k in np.flatnonzero(weights > 0.0)]


def _run_sectors(
    sectors: list[int], work: Callable[[int], ComplexArray], workers: int
) -> list[ComplexArray]:
    if workers > 1 and len(sectors) >= PARALLEL_MIN_SECTORS:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            return list(executor.map(work, sectors))
    return [work(sector) for sector in sectors]


def _dense_block(hamiltonian: HamiltonianOp, sector: int, block: ComplexArray, t: float) -> ComplexArray:
    values, vectors = hamiltonian.eigensystem(sector)
    return vectors @ (np.exp(-1j * values * t) * (vectors.T @ block))


def evolve(
    hamiltonian: HamiltonianOp,
    state: StateVector,
    t: float,
    propagator: Optional[Propagator] = None,
) -> StateVector:
    """
    psi(t) = exp(-i H t) psi(0).

    Raises:
        BasisMismatch: If state and Hamiltonian live on different bases
        ConvergenceFailure: If the Krylov back end cannot meet its tolerance
    """
    require_same_basis(hamiltonian.basis, state.basis)
    propagator = propagator or Propagator()
    basis = hamiltonian.basis
    sectors = _active_sectors(state)

    if propagator.method is PropagatorMethod.DENSE:
        def work(sector: int) -> ComplexArray:
            return _dense_block(hamiltonian, sector, state.block(sector), t)
    else:
        def work(sector: int) -> ComplexArray:
            diagonal, off = hamiltonian.bands(sector)
            return krylov_expm_block(
                diagonal,
                off,
                state.block(sector),
                t,
                tolerance=propagator.tolerance,
                krylov_dim=propagator.krylov_dim,
                max_steps=propagator.max_steps,
            )

    amplitudes = np.zeros(basis.dimension, dtype=np.complex128)
    for sector, block in zip(sectors, _run_sectors(sectors, work, propagator.worker_count())):
        amplitudes[basis.sector_slice(sector)] = block
    return StateVector(basis, amplitudes, state.leakage)


def evolve_series(
    hamiltonian: HamiltonianOp,
    state: StateVector,
    times: Sequence[float],
    propagator: Optional[Propagator] = None,
) -> list[StateVector]:
    """
    States at every time of a grid.

    The dense path reuses one eigendecomposition per sector for all times;
    the Krylov path steps incrementally and needs non-decreasing times.
    """
    require_same_basis(hamiltonian.basis, state.basis)
    propagator = propagator or Propagator()
    grid = np.asarray(times, dtype=float)
    if grid.ndim != 1:
        raise ValueError("Times must be one-dimensional")

    if propagator.method is PropagatorMethod.KRYLOV:
        if np.any(np.diff(grid) < 0):
            raise ValueError("Krylov series needs non-decreasing times")
        states = []
        current, previous = state, 0.0
        for t in grid:
            current = evolve(hamiltonian, current, float(t) - previous, propagator)
            previous = float(t)
            states.append(current)
        return states

    basis = hamiltonian.basis
    sectors = _active_sectors(state)

    def work(sector: int) -> ComplexArray:
        values, vectors = hamiltonian.eigensystem(sector)
        coefficients = vectors.T @ state.block(sector)
        return (np.exp(-1j * np.outer(grid, values)) * coefficients) @ vectors.T

    amplitudes = np.zeros((len(grid), basis.dimension), dtype=np.complex128)
    for sector, series in zip(sectors, _run_sectors(sectors, work, propagator.worker_count())):
        amplitudes[:, basis.sector_slice(sector)] = series
    return [StateVector(basis, row, state.leakage) for row in amplitudes]


def quench_schedule(
    far: HamiltonianOp,
    resonant: HamiltonianOp,
    state: StateVector,
    hold: float,
    park: float = 0.0,
    propagator: Optional[Propagator] = None,
) -> StateVector:
    """
    Evolve under `far` for `park`, then switch instantly to `resonant` for `hold`.
    """
    require_same_basis(far.basis, resonant.basis)
    if hold < 0 or park < 0:
        raise ValueError("Hold and park durations must be non-negative")
    parked = evolve(far, state, park, propagator) if park > 0 else state
    return evolve(resonant, parked, hold, propagator)


def sector_weights(state: StateVector) -> FloatArray:
    """Probability weight per conserved-quantity sector."""
    return state.sector_weights()


def energy(hamiltonian: HamiltonianOp, state: StateVector) -> float:
    """<psi|H|psi> in rad/s."""
    return hamiltonian.expectation(state)
