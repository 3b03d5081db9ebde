"""
States, phonon distributions and ladder-operator actions on a SectorBasis.

Every state-producing operation carries truncation leakage forward so the
only systematic error of the simulator stays observable.
"""

import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.special import gammaln
from scipy.stats import poisson

from ..shared import (
    BasisMismatch,
    ComplexArray,
    FloatArray,
    LadderDirection,
    Mode,
    ModeLike,
    TruncationLeak,
    as_mode,
)
from .basis import SectorBasis

logger = logging.getLogger(__name__)

LEAKAGE_LIMIT = 1e-6
ADEQUACY_FRACTION = 0.25


@dataclass(frozen=True, eq=False)
class StateVector:
    """Complex amplitudes over a SectorBasis, stored sector-major."""

    basis: SectorBasis
    amplitudes: ComplexArray
    leakage: float = 0.0

    def __post_init__(self) -> None:
        if self.amplitudes.shape != (self.basis.dimension,):
            raise ValueError(
                f"Amplitude vector has shape {self.amplitudes.shape}, "
                f"basis dimension is {self.basis.dimension}"
            )

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "StateVector":
        norm = self.norm
        if norm == 0.0:
            raise ValueError("Cannot normalize the zero vector")
        return StateVector(self.basis, self.amplitudes / norm, self.leakage)

    def block(self, sector: int) -> ComplexArray:
        """Amplitudes of one sector (a view)."""
        return self.amplitudes[self.basis.sector_slice(sector)]

    def probabilities(self) -> FloatArray:
        return np.abs(self.amplitudes) ** 2

    def sector_weights(self) -> FloatArray:
        """Probability weight per sector, in sector order."""
        return np.add.reduceat(self.probabilities(), self.basis.offsets[:-1])

    def overlap(self, other: "StateVector") -> complex:
        """<self|other>."""
        require_same_basis(self.basis, other.basis)
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def amplitude(self, n_a: int, n_b: int, n_c: int) -> complex:
        return complex(self.amplitudes[self.basis.index((n_a, n_b, n_c))])


@dataclass(frozen=True, eq=False)
class PhononDistribution:
    """Phonon-number probabilities of a single mode."""

    mode: Mode
    probabilities: FloatArray = field(repr=False)

    @property
    def n_max(self) -> int:
        return len(self.probabilities) - 1

    @property
    def mean(self) -> float:
        return float(np.dot(np.arange(len(self.probabilities)), self.probabilities))

    @property
    def total(self) -> float:
        return float(np.sum(self.probabilities))

    def normalized(self) -> "PhononDistribution":
        return PhononDistribution(self.mode, self.probabilities / self.total)

    def l1_distance(self, other: "PhononDistribution") -> float:
        size = max(len(self.probabilities), len(other.probabilities))
        mine = np.pad(self.probabilities, (0, size - len(self.probabilities)))
        theirs = np.pad(other.probabilities, (0, size - len(other.probabilities)))
        return float(np.sum(np.abs(mine - theirs)))

    @classmethod
    def poisson(cls, nbar: float, n_max: int, mode: ModeLike = Mode.A) -> "PhononDistribution":
        """Poisson probabilities up to n_max, not renormalized."""
        return cls(as_mode(mode), poisson.pmf(np.arange(n_max + 1), nbar))

    @classmethod
    def geometric(cls, nbar: float, n_max: int, mode: ModeLike = Mode.A) -> "PhononDistribution":
        """Thermal (geometric) probabilities up to n_max, not renormalized."""
        n = np.arange(n_max + 1)
        if nbar == 0:
            return cls(as_mode(mode), (n == 0).astype(float))
        ratio = nbar / (1.0 + nbar)
        return cls(as_mode(mode), ratio ** n / (1.0 + nbar))

    @classmethod
    def fock(cls, n: int, n_max: int, mode: ModeLike = Mode.A) -> "PhononDistribution":
        probabilities = np.zeros(n_max + 1)
        probabilities[n] = 1.0
        return cls(as_mode(mode), probabilities)


def require_same_basis(first: SectorBasis, second: SectorBasis) -> None:
    if not first.same_as(second):
        raise BasisMismatch(f"{first!r} and {second!r} differ")


def fock_state(basis: SectorBasis, n_a: int, n_b: int, n_c: int) -> StateVector:
    """
    Unit vector on |n_a, n_b, n_c>.

    Raises:
        OutOfTruncation: If the ket lies outside the cutoffs
    """
    amplitudes = np.zeros(basis.dimension, dtype=np.complex128)
    amplitudes[basis.index((n_a, n_b, n_c))] = 1.0
    return StateVector(basis, amplitudes)


def coherent_amplitudes(alpha: complex, n_max: int) -> tuple[ComplexArray, float]:
    """
    Coherent-state amplitudes e^{-|a|^2/2} a^n / sqrt(n!) for n = 0..n_max.

    Returns:
        Tuple of (amplitudes, leaked weight above n_max)
    """
    n = np.arange(n_max + 1)
    magnitude = abs(alpha)
    if magnitude == 0.0:
        amplitudes = (n == 0).astype(np.complex128)
        return amplitudes, 0.0
    log_magnitude = -0.5 * magnitude ** 2 + n * np.log(magnitude) - 0.5 * gammaln(n + 1)
    amplitudes = np.exp(log_magnitude) * np.exp(1j * n * np.angle(alpha))
    leaked = float(max(0.0, poisson.sf(n_max, magnitude ** 2)))
    return amplitudes.astype(np.complex128), leaked


def coherent_state(
    basis: SectorBasis,
    mode: ModeLike,
    alpha: complex,
    others: tuple[int, int] = (0, 0),
    allow_leak: bool = False,
) -> StateVector:
    """
    Coherent state of one mode, Fock states on the other two.

    Args:
        basis: Target basis
        mode: Mode carrying the coherent state
        alpha: Coherent amplitude (real >= 0 by convention)
        others: Fock numbers of the remaining two modes, in a, b, c order
        allow_leak: Skip the truncation adequacy and leakage guards

    Returns:
        Normalized state; `leakage` records the pre-renormalization loss

    Raises:
        TruncationLeak: If the truncation is inadequate and not overridden
        OutOfTruncation: If the Fock numbers lie outside the cutoffs
    """
    mode = as_mode(mode)
    n_max = basis.truncation.cutoff(mode)
    nbar = abs(alpha) ** 2
    if not allow_leak and nbar > ADEQUACY_FRACTION * n_max:
        raise TruncationLeak(
            f"|alpha|^2 = {nbar:.4g} exceeds n_max/4 = {n_max / 4:.4g} for mode {mode.value}",
        )

    coefficients, leaked = coherent_amplitudes(alpha, n_max)
    if not allow_leak and leaked > LEAKAGE_LIMIT:
        raise TruncationLeak(
            f"Coherent state on mode {mode.value} leaks {leaked:.3e} above n_max = {n_max}",
            leakage=leaked,
        )

    amplitudes = np.zeros(basis.dimension, dtype=np.complex128)
    fixed = list(others)
    for n, coefficient in enumerate(coefficients):
        ket = fixed.copy()
        ket.insert(mode.position, n)
        amplitudes[basis.index(tuple(ket))] = coefficient
    state = StateVector(basis, amplitudes, leakage=leaked)
    logger.debug(f"Coherent state |alpha|^2 = {nbar:.4g} on mode {mode.value}, leakage {leaked:.3e}")
    return state.normalized()


def superpose(states: Sequence[StateVector], coefficients: Sequence[complex]) -> StateVector:
    """Normalized linear combination of states on a common basis."""
    if not states or len(states) != len(coefficients):
        raise ValueError("Need one coefficient per state")
    basis = states[0].basis
    amplitudes = np.zeros(basis.dimension, dtype=np.complex128)
    for state, coefficient in zip(states, coefficients):
        require_same_basis(basis, state.basis)
        amplitudes += coefficient * state.amplitudes
    leakage = max(state.leakage for state in states)
    return StateVector(basis, amplitudes, leakage).normalized()


def populations(state: StateVector, mode: ModeLike) -> PhononDistribution:
    """Phonon-number distribution of one mode, summed over the other two."""
    mode = as_mode(mode)
    n_max = state.basis.truncation.cutoff(mode)
    probabilities = np.bincount(
        state.basis.occupation(mode), weights=state.probabilities(), minlength=n_max + 1
    )
    return PhononDistribution(mode, probabilities)


def apply_ladder(state: StateVector, mode: ModeLike, direction: LadderDirection | str) -> StateVector:
    """
    Act with a or a+ on one mode; the result is not normalized.

    Raising beyond the cutoff drops the amplitude and adds its weight to the
    returned state's leakage.
    """
    mode = as_mode(mode)
    direction = LadderDirection(direction)
    basis = state.basis
    n = basis.occupation(mode)
    n_max = basis.truncation.cutoff(mode)
    shift = np.zeros(3, dtype=np.int64)
    result = np.zeros(basis.dimension, dtype=np.complex128)
    dropped = 0.0

    if direction is LadderDirection.LOWER:
        shift[mode.position] = -1
        source = np.flatnonzero(n > 0)
        factors = np.sqrt(n[source])
    else:
        shift[mode.position] = 1
        source = np.flatnonzero(n < n_max)
        factors = np.sqrt(n[source] + 1.0)
        at_cutoff = np.flatnonzero(n == n_max)
        dropped = float(np.sum((n_max + 1.0) * np.abs(state.amplitudes[at_cutoff]) ** 2))

    targets = basis.indices(basis.kets[source] + shift)
    result[targets] = factors * state.amplitudes[source]
    return StateVector(basis, result, state.leakage + dropped)


def apply_trilinear(state: StateVector) -> StateVector:
    """Act with a+ b c (unnormalized)."""
    lowered = apply_ladder(apply_ladder(state, Mode.C, LadderDirection.LOWER), Mode.B, LadderDirection.LOWER)
    return apply_ladder(lowered, Mode.A, LadderDirection.RAISE)
