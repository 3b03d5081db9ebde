"""
Scripted reproductions of the four trilinear-coupling experiments.

Each run_* function takes a resolved ScenarioConfig and returns plain
results; ScenarioRunner turns them into tables for the writers. Dynamics
run at the detuning override when one is configured and on resonance
otherwise; the coupling rate always comes from the trap.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np
from scipy.ndimage import maximum_filter1d, minimum_filter1d

from ..config import ScenarioConfig
from ..dynamics import (
    Propagator,
    avoided_crossing_scan,
    build_hamiltonian,
    evolve,
    evolve_series,
)
from ..hilbert import (
    PhononDistribution,
    SectorBasis,
    Truncation,
    build_basis,
    coherent_state,
    fock_state,
    populations,
)
from ..modes import ModeSystem, build_mode_system
from ..observe import (
    SinusoidFit,
    fit_geometric,
    fit_poisson,
    fit_sinusoid,
    probe_spectrum,
    reconstruct_with_diagnostics,
    synthesize_sideband,
)
from ..shared import (
    TWO_PI,
    FloatArray,
    Mode,
    SidebandKind,
    khz_to_rad_s,
    linspace_grid,
    rad_s_to_hz,
)
from .types import EvolutionRecord, Table, record_evolution

logger = logging.getLogger(__name__)


def mode_system(config: ScenarioConfig) -> ModeSystem:
    """Coupled-mode system of the configured trap."""
    system = build_mode_system(config.trap.to_trap_config(), config.trap.delta_override)
    frequencies = system.in_khz()
    logger.info(
        "Resolved modes: "
        + ", ".join(f"{name} = {value:.4f} kHz" for name, value in frequencies.items())
    )
    return system


def propagator_for(config: ScenarioConfig) -> Propagator:
    settings = config.propagator
    return Propagator(
        method=settings.method,
        tolerance=settings.tolerance,
        krylov_dim=settings.krylov_dim,
        max_steps=settings.max_steps,
    )


def dynamics_detuning(config: ScenarioConfig) -> float:
    """Detuning used for time evolution: the override, else resonance."""
    override = config.trap.delta_override
    return 0.0 if override is None else override


def _basis(config: ScenarioConfig, n_max_c: Optional[int] = None) -> SectorBasis:
    truncation = config.truncation.to_truncation()
    if n_max_c is not None:
        truncation = truncation.model_copy(update={"n_max_c": n_max_c})
    return build_basis(truncation)


def run_avoided_crossing(config: ScenarioConfig) -> Table:
    """
    Single-excitation eigenvalues across a detuning scan.

    Columns: delta_hz, lower_hz, upper_hz, gap_hz (ordinary frequencies).
    """
    system = mode_system(config)
    settings = config.avoided_crossing
    deltas = linspace_grid(
        settings.delta_min_xi * system.xi, settings.delta_max_xi * system.xi, settings.points
    )
    basis = build_basis(Truncation.uniform(1))
    table = Table("avoided_crossing", ["delta_hz", "lower_hz", "upper_hz", "gap_hz"])
    for spectrum in avoided_crossing_scan(basis, system.xi, deltas):
        lower, upper = spectrum.eigenvalues
        table.add_row(
            [
                rad_s_to_hz(spectrum.delta),
                rad_s_to_hz(lower),
                rad_s_to_hz(upper),
                rad_s_to_hz(upper - lower),
            ]
        )
    logger.info(f"Avoided-crossing scan over {len(table)} detunings")
    return table


def run_probe_spectrum(config: ScenarioConfig) -> Table:
    """
    Blue-sideband probe spectrum of the hybridized |100>, |011> pair at the
    trap's own detuning.

    Columns: probe_detuning_hz, probability.
    """
    system = mode_system(config)
    settings = config.avoided_crossing
    basis = build_basis(Truncation.uniform(1))
    spectrum = avoided_crossing_scan(basis, system.xi, [system.delta])[0]
    reach = 4.0 * system.xi + abs(system.delta)
    detunings = linspace_grid(-reach, reach, settings.probe_points)
    probabilities = probe_spectrum(
        spectrum.eigenvalues,
        spectrum.eigenvectors[0, :],
        detunings,
        khz_to_rad_s(settings.probe_khz),
        settings.probe_duration_ms * 1e-3,
    )
    table = Table("probe_spectrum", ["probe_detuning_hz", "probability"])
    for detuning, probability in zip(detunings, probabilities):
        table.add_row([rad_s_to_hz(detuning), probability])
    return table


@dataclass
class ExchangeOutcome:
    """Single-phonon exchange record with its fitted oscillation."""

    record: EvolutionRecord
    reference: FloatArray
    fit: SinusoidFit
    xi: float


def run_energy_exchange(config: ScenarioConfig) -> ExchangeOutcome:
    """
    |100> prepared at the park detuning, then quenched onto resonance.

    On resonance n_a(tau) = cos^2(xi tau); the fitted frequency of n_a is xi/pi.
    """
    system = mode_system(config)
    settings = config.exchange
    propagator = propagator_for(config)
    basis = _basis(config)
    far = build_hamiltonian(basis, system.xi, khz_to_rad_s(settings.park_delta_khz))
    resonant = build_hamiltonian(basis, system.xi, dynamics_detuning(config))

    state = fock_state(basis, 1, 0, 0)
    if settings.park_time_us > 0:
        state = evolve(far, state, settings.park_time_us * 1e-6, propagator)

    times = linspace_grid(0.0, settings.cycles * math.pi / system.xi, settings.points)
    states = evolve_series(resonant, state, times, propagator)
    record = record_evolution("exchange", times, states)
    reference = np.cos(system.xi * np.asarray(times)) ** 2
    fit = fit_sinusoid(times, record.mean(Mode.A), 2.0 * system.xi)
    logger.info(
        f"Exchange frequency {fit.frequency_hz:.3f} Hz (xi/pi = {system.xi / math.pi:.3f} Hz)"
    )
    return ExchangeOutcome(record=record, reference=reference, fit=fit, xi=system.xi)


def rabi_frequency(xi: float, n: float) -> float:
    """Jaynes-Cummings Rabi frequency 2 sqrt(n+1) xi of |1,0,n> <-> |0,1,n+1>."""
    return 2.0 * math.sqrt(n + 1.0) * xi


def windowed_contrast(values: FloatArray, window: int) -> FloatArray:
    """Peak-to-peak of a series over a centered sliding window."""
    size = max(1, window)
    return maximum_filter1d(values, size, mode="nearest") - minimum_filter1d(
        values, size, mode="nearest"
    )


def jc_reference(probabilities: FloatArray, xi: float, times: FloatArray) -> FloatArray:
    """n_a(tau) = (1 + sum_n p_n cos(W_n tau)) / 2 for field probabilities p_n."""
    rates = np.array([rabi_frequency(xi, n) for n in range(len(probabilities))])
    return 0.5 * (1.0 + np.cos(np.outer(times, rates)) @ probabilities)


@dataclass
class JaynesCummingsOutcome:
    """Fock-state Rabi runs and the optional coherent collapse-revival run."""

    xi: float
    fock_records: Dict[int, EvolutionRecord] = field(default_factory=dict)
    fock_fits: Dict[int, SinusoidFit] = field(default_factory=dict)
    coherent_record: Optional[EvolutionRecord] = None
    coherent_reference: Optional[FloatArray] = None
    contrast: Optional[FloatArray] = None
    metrics: Dict[str, float] = field(default_factory=dict)


def _collapse_revival(
    times: FloatArray, contrast: FloatArray, xi: float, nbar: float
) -> Dict[str, float]:
    # Revival time estimate 2 pi sqrt(nbar + 1) / xi splits the two windows.
    revival = TWO_PI * math.sqrt(nbar + 1.0) / xi
    early = times <= 0.5 * revival
    late = (times >= 0.5 * revival) & (times <= 1.5 * revival)
    metrics = {"revival_estimate_s": revival}
    if np.any(early):
        position = int(np.argmin(np.where(early, contrast, np.inf)))
        metrics["collapse_contrast"] = float(contrast[position])
        metrics["collapse_time_s"] = float(times[position])
    if np.any(late):
        position = int(np.argmax(np.where(late, contrast, -np.inf)))
        metrics["revival_contrast"] = float(contrast[position])
        metrics["revival_time_s"] = float(times[position])
    return metrics


def run_jaynes_cummings(config: ScenarioConfig) -> JaynesCummingsOutcome:
    """
    |1,0,n> Fock runs plus a coherent-field run of the radial zigzag mode.

    Modes a and b form the two-level system (N1 = 1); mode c is the field.
    """
    system = mode_system(config)
    settings = config.jc
    propagator = propagator_for(config)
    xi = system.xi
    outcome = JaynesCummingsOutcome(xi=xi)
    delta = dynamics_detuning(config)
    base_rate = rabi_frequency(xi, 0)

    if settings.fock:
        basis = _basis(config)
        hamiltonian = build_hamiltonian(basis, xi, delta)
        times = linspace_grid(0.0, settings.cycles * TWO_PI / base_rate, settings.points)
        for n in settings.fock:
            # The partner ket |0,1,n+1> must exist or the block is silently cut.
            basis.index((0, 1, n + 1))
            states = evolve_series(hamiltonian, fock_state(basis, 1, 0, n), times, propagator)
            record = record_evolution(f"jc_fock_{n}", times, states)
            outcome.fock_records[n] = record
            outcome.fock_fits[n] = fit_sinusoid(times, record.mean(Mode.A), rabi_frequency(xi, n))
            logger.info(
                f"Fock n = {n}: fitted Rabi frequency {outcome.fock_fits[n].frequency_hz:.4f} Hz"
            )

    if settings.coherent_nbar is not None:
        nbar = settings.coherent_nbar
        basis = _basis(config, n_max_c=settings.coherent_n_max_c)
        hamiltonian = build_hamiltonian(basis, xi, delta)
        initial = coherent_state(basis, Mode.C, math.sqrt(nbar), others=(1, 0))
        times = np.asarray(
            linspace_grid(0.0, settings.coherent_cycles * TWO_PI / base_rate, settings.points)
        )
        states = evolve_series(hamiltonian, initial, times, propagator)
        record = record_evolution("jc_coherent", times, states)
        n_a = record.mean(Mode.A)
        window = int(round((TWO_PI / rabi_frequency(xi, nbar)) / (times[1] - times[0])))

        outcome.coherent_record = record
        outcome.coherent_reference = jc_reference(
            populations(initial, Mode.C).probabilities, xi, times
        )
        outcome.contrast = windowed_contrast(n_a, window)
        outcome.metrics = _collapse_revival(times, outcome.contrast, xi, nbar)
        logger.info(f"Coherent nbar = {nbar}: {outcome.metrics}")
    return outcome


@dataclass
class PdcOutcome:
    """Depleted-pump down-conversion record with thermality diagnostics."""

    xi: float
    record: EvolutionRecord
    geometric_b: FloatArray
    geometric_c: FloatArray
    poisson_a: FloatArray
    snapshots: Table
    tomography: Optional[Table] = None


def _tomography_rows(
    config: ScenarioConfig, record: EvolutionRecord, indices: list[int], xi: float
) -> Table:
    observe = config.observe
    omega0 = khz_to_rad_s(observe.omega0_khz)
    probe_times = linspace_grid(0.0, observe.duration_us * 1e-6, observe.points)[1:]
    columns = ["xi_tau", "mode", "residual_norm", "condition_number"]
    columns += [f"p_{n}" for n in range(observe.n_cut + 1)]
    table = Table("pdc_tomography", columns)
    for i in indices:
        for mode in (Mode.A, Mode.B, Mode.C):
            probabilities = record.distributions[mode][i][: observe.n_cut + 1]
            signal = synthesize_sideband(
                PhononDistribution(mode, probabilities),
                SidebandKind.BLUE,
                omega0,
                probe_times,
                observe.gamma0_per_s,
            )
            result = reconstruct_with_diagnostics(signal, observe.n_cut)
            table.add_row(
                [
                    xi * record.times[i],
                    float(mode.position),
                    result.residual_norm,
                    result.condition_number,
                    *result.distribution.probabilities,
                ]
            )
    return table


def run_pdc_depleted(config: ScenarioConfig) -> PdcOutcome:
    """
    Coherent pump in mode a down-converting into vacuum modes b and c.

    Modes b and c start out thermal-looking; once the pump depletes their
    distributions move away from geometric.
    """
    system = mode_system(config)
    settings = config.pdc
    propagator = propagator_for(config)
    xi = system.xi
    if settings.truncation is not None:
        basis = build_basis(settings.truncation.to_truncation())
    else:
        basis = build_basis(Truncation.uniform(settings.n_max))
    hamiltonian = build_hamiltonian(basis, xi, dynamics_detuning(config))
    initial = coherent_state(basis, Mode.A, math.sqrt(settings.pump_nbar))

    grid = np.asarray(linspace_grid(0.0, settings.xi_tau_max, settings.points))
    xi_tau = np.union1d(grid, np.asarray(settings.xi_tau, dtype=float))
    times = xi_tau / xi
    states = evolve_series(hamiltonian, initial, times, propagator)
    record = record_evolution("pdc", times, states)

    def series(mode: Mode, fit) -> FloatArray:
        return np.array(
            [fit(PhononDistribution(mode, row)).residual_norm for row in record.distributions[mode]]
        )

    geometric_b = series(Mode.B, fit_geometric)
    geometric_c = series(Mode.C, fit_geometric)
    poisson_a = series(Mode.A, fit_poisson)
    means = record.means

    snapshots = Table(
        "pdc_snapshots",
        ["xi_tau", "mean_a", "mean_b", "mean_c", "geometric_l1_b", "geometric_l1_c", "poisson_l1_a"],
    )
    indices = [int(np.searchsorted(xi_tau, value)) for value in settings.xi_tau]
    for i in indices:
        snapshots.add_row(
            [
                xi_tau[i],
                means[Mode.A][i],
                means[Mode.B][i],
                means[Mode.C][i],
                geometric_b[i],
                geometric_c[i],
                poisson_a[i],
            ]
        )

    tomography = _tomography_rows(config, record, indices, xi) if settings.tomography else None
    logger.info(f"PDC run over {len(times)} times, max leakage {record.leakage.max():.3e}")
    return PdcOutcome(
        xi=xi,
        record=record,
        geometric_b=geometric_b,
        geometric_c=geometric_c,
        poisson_a=poisson_a,
        snapshots=snapshots,
        tomography=tomography,
    )
