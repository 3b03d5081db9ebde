"""
Integration tests for the scripted experiments.

Each test runs a full scenario from a ScenarioConfig through the modes,
Hilbert-space, dynamics and observation layers.
"""

import math

import numpy as np
import pytest

from trilin.config import ScenarioConfig
from trilin.scenarios import (
    ScenarioRunner,
    jc_reference,
    mode_system,
    rabi_frequency,
    run_avoided_crossing,
    run_energy_exchange,
    run_jaynes_cummings,
    run_pdc_depleted,
    run_probe_spectrum,
)
from trilin.scenarios.experiments import dynamics_detuning
from trilin.scenarios.types import EvolutionRecord
from trilin.shared import (
    Mode,
    OutOfTruncation,
    PhysicsError,
    ScenarioName,
    TruncationLeak,
    khz_to_rad_s,
    rad_s_to_hz,
)


def with_overrides(config: ScenarioConfig, **sections) -> ScenarioConfig:
    document = config.model_dump()
    for section, values in sections.items():
        document[section] = {**(document.get(section) or {}), **values}
    return ScenarioConfig.model_validate(document)


@pytest.mark.integration
class TestAvoidedCrossing:
    """Detuning scan and probe spectrum of the single-excitation pair."""

    def test_gap_follows_coupling(self, fast_config):
        """Test the scanned gap is sqrt(delta^2 + 4 xi^2) with its minimum at 2 xi."""
        xi = mode_system(fast_config).xi
        table = run_avoided_crossing(fast_config)
        assert len(table) == 21
        delta = table.column("delta_hz")
        expected = np.sqrt(delta ** 2 + 4 * rad_s_to_hz(xi) ** 2)
        np.testing.assert_allclose(table.column("gap_hz"), expected, rtol=1e-10)
        assert table.column("gap_hz").min() == pytest.approx(xi / math.pi, rel=1e-10)

    def test_scan_spans_five_coupling_rates(self, fast_config):
        """Test the default scan runs from -5 xi to 5 xi."""
        xi_hz = rad_s_to_hz(mode_system(fast_config).xi)
        delta = run_avoided_crossing(fast_config).column("delta_hz")
        assert delta[0] == pytest.approx(-5 * xi_hz)
        assert delta[-1] == pytest.approx(5 * xi_hz)

    def test_probe_spectrum(self, fast_config):
        """Test the probe spectrum is a probability with visible lines."""
        table = run_probe_spectrum(fast_config)
        probabilities = table.column("probability")
        assert len(table) == 41
        assert np.all((probabilities >= 0) & (probabilities <= 1))
        assert probabilities.max() > 0.1


@pytest.mark.integration
@pytest.mark.physics
class TestEnergyExchange:
    """Single-phonon exchange on resonance."""

    def test_dynamics_run_on_resonance_without_override(self, fast_config):
        """The trap's own detuning is reported but not evolved under."""
        assert mode_system(fast_config).delta != 0.0
        assert dynamics_detuning(fast_config) == 0.0
        shifted = with_overrides(fast_config, trap={"delta_khz": -44.0})
        assert dynamics_detuning(shifted) == pytest.approx(khz_to_rad_s(-44.0))

    def test_cos_squared(self, fast_config):
        """Test n_a follows cos^2(xi t) and n_b tracks n_c."""
        outcome = run_energy_exchange(fast_config)
        n_a = outcome.record.mean(Mode.A)
        assert np.max(np.abs(n_a - outcome.reference)) <= 1e-9
        np.testing.assert_allclose(
            outcome.record.mean(Mode.B), outcome.record.mean(Mode.C), atol=1e-12
        )
        outcome.record.validate()

    def test_exchange_frequency(self, fast_config):
        """Test the fitted exchange frequency is xi / pi."""
        outcome = run_energy_exchange(fast_config)
        assert outcome.fit.frequency_hz == pytest.approx(outcome.xi / math.pi, rel=1e-6)
        # Measured exchange frequency of the reference trap is 2.801 kHz.
        assert outcome.fit.frequency_hz == pytest.approx(2801.0, rel=0.02)

    def test_krylov_back_end(self, fast_config):
        """Test the exchange run on the Krylov propagator."""
        config = with_overrides(fast_config, propagator={"method": "krylov"})
        outcome = run_energy_exchange(config)
        assert np.max(np.abs(outcome.record.mean(Mode.A) - outcome.reference)) <= 1e-8

    def test_park_before_quench(self, fast_config):
        """Parking at -44 kHz mixes in only a little of |011>."""
        config = with_overrides(fast_config, exchange={"park_time_us": 50.0})
        n_a = run_energy_exchange(config).record.mean(Mode.A)
        assert 0.99 < n_a[0] < 1.0 - 1e-6

    def test_detuned_exchange_is_incomplete(self, fast_config):
        """Test a detuning of 2 xi leaves half the phonon in mode a."""
        xi_khz = mode_system(fast_config).xi / (2 * math.pi * 1e3)
        config = with_overrides(fast_config, trap={"delta_khz": 2 * xi_khz})
        n_a = run_energy_exchange(config).record.mean(Mode.A)
        # Minimum population is delta^2 / (delta^2 + 4 xi^2) = 1/2.
        assert n_a.min() == pytest.approx(0.5, abs=0.02)


@pytest.mark.integration
@pytest.mark.physics
class TestJaynesCummings:
    """Fock-state Rabi frequencies and coherent collapse-revival."""

    def test_rabi_frequency_scaling(self, fast_config):
        """Test the |0> and |1> Rabi frequencies."""
        outcome = run_jaynes_cummings(fast_config)
        base = outcome.fock_fits[0].omega
        assert base == pytest.approx(rabi_frequency(outcome.xi, 0), rel=1e-6)
        assert outcome.fock_fits[1].omega / base == pytest.approx(math.sqrt(2.0), abs=1e-3)

    @pytest.mark.slow
    def test_rabi_ratios_up_to_four(self, fast_config):
        """Test Rabi ratios sqrt(n + 1) for n up to 4."""
        config = with_overrides(fast_config, jc={"fock": [0, 1, 2, 3, 4]})
        outcome = run_jaynes_cummings(config)
        base = outcome.fock_fits[0].omega
        for n in range(5):
            assert outcome.fock_fits[n].omega / base == pytest.approx(math.sqrt(n + 1), abs=1e-3)

    def test_fock_partner_outside_truncation(self, fast_config):
        """Test a Fock number above the mode c cutoff."""
        config = with_overrides(fast_config, jc={"fock": [8]})
        with pytest.raises(OutOfTruncation):
            run_jaynes_cummings(config)

    def test_coherent_collapse_and_revival(self, fast_config):
        """Test collapse then revival of a coherent field in mode c."""
        config = with_overrides(
            fast_config,
            truncation={"n_max_a": 1, "n_max_b": 1, "n_max_c": 16},
            jc={"fock": [], "coherent_nbar": 1.8, "points": 401},
        )
        outcome = run_jaynes_cummings(config)
        n_a = outcome.coherent_record.mean(Mode.A)
        assert np.max(np.abs(n_a - outcome.coherent_reference)) <= 1e-8
        assert outcome.metrics["collapse_contrast"] < 0.1
        assert outcome.metrics["revival_contrast"] > 0.3
        assert outcome.metrics["collapse_time_s"] < outcome.metrics["revival_time_s"]

    def test_coherent_truncation_guard(self, fast_config):
        """Test a mode c cutoff too small for the coherent field."""
        config = with_overrides(
            fast_config, jc={"fock": [], "coherent_nbar": 1.8, "coherent_n_max_c": 6}
        )
        with pytest.raises(TruncationLeak):
            run_jaynes_cummings(config)

    def test_reference_for_fock_field(self):
        """Test the closed-form reference for a single-Fock field."""
        times = np.linspace(0.0, 1.0, 5)
        reference = jc_reference(np.array([0.0, 1.0]), 1.0, times)
        np.testing.assert_allclose(reference, np.cos(math.sqrt(2.0) * times) ** 2, atol=1e-15)


@pytest.mark.integration
@pytest.mark.physics
class TestDownConversion:
    """Depleted-pump parametric down-conversion."""

    def test_pump_conservation(self, fast_config):
        """Test n_a + n_b stays at the pump occupation and n_b tracks n_c."""
        outcome = run_pdc_depleted(fast_config)
        means = outcome.record.means
        np.testing.assert_allclose(means[Mode.A] + means[Mode.B], means[Mode.A][0], atol=1e-8)
        np.testing.assert_allclose(means[Mode.B], means[Mode.C], atol=1e-10)
        outcome.record.validate()

    def test_snapshots_at_requested_times(self, fast_config):
        """Test snapshots land exactly on the requested xi tau values."""
        outcome = run_pdc_depleted(fast_config)
        np.testing.assert_allclose(outcome.snapshots.column("xi_tau"), [0.2, 1.0])

    def test_thermality_degrades(self, fast_config):
        """Test mode b moves away from geometric as the pump depletes."""
        snapshots = run_pdc_depleted(fast_config).snapshots
        early, late = snapshots.column("geometric_l1_b")
        assert early < late

    @pytest.mark.slow
    def test_reference_pump(self, default_config):
        """nbar = 3.7 pump: thermal at xi tau = 0.2, not at 2.0."""
        outcome = run_pdc_depleted(default_config)
        means = outcome.record.means
        np.testing.assert_allclose(means[Mode.A] + means[Mode.B], 3.7, atol=1e-8)
        np.testing.assert_allclose(outcome.snapshots.column("xi_tau"), [0.2, 0.5, 1.0, 2.0])
        l1 = outcome.snapshots.column("geometric_l1_b")
        assert l1[0] < 0.02
        assert l1[-1] > l1[0]
        assert not outcome.record.flagged

    def test_tomography_of_snapshots(self, fast_config):
        """Test tomography recovers each mode's snapshot distribution."""
        config = with_overrides(
            fast_config,
            pdc={"tomography": True},
            observe={"n_cut": 8, "duration_us": 2000.0, "points": 400},
        )
        outcome = run_pdc_depleted(config)
        table = outcome.tomography
        assert len(table) == 6
        assert table.columns[:4] == ["xi_tau", "mode", "residual_norm", "condition_number"]
        np.testing.assert_array_equal(table.column("mode")[:3], [0.0, 1.0, 2.0])
        early = int(np.argmin(np.abs(outcome.record.times * outcome.xi - 0.2)))
        for mode, row in zip(Mode, table.rows[:3]):
            np.testing.assert_allclose(
                row[4:], outcome.record.distributions[mode][early][:9], atol=1e-5
            )


@pytest.mark.integration
class TestScenarioRunner:
    """Dispatch and table assembly."""

    def test_exchange_tables_and_metrics(self, fast_config):
        """Test the exchange table and its fitted frequency metric."""
        result = ScenarioRunner(fast_config).run("exchange")
        assert [table.name for table in result.tables] == ["exchange"]
        assert result.metrics["exchange_frequency_hz"] == pytest.approx(
            result.metrics["xi_over_pi_hz"], rel=1e-6
        )
        assert result.leakage_summary["flagged"] is False

    def test_jc_tables(self, fast_config):
        """Test Jaynes-Cummings tables and Rabi ratios."""
        result = ScenarioRunner(fast_config).run(ScenarioName.JAYNES_CUMMINGS)
        names = [table.name for table in result.tables]
        assert names == ["jc_rabi", "jc_fock_0", "jc_fock_1"]
        rabi = result.table("jc_rabi")
        np.testing.assert_allclose(rabi.column("ratio_to_n0"), rabi.column("expected_ratio"), atol=1e-3)
        assert "rabi_frequency_hz_n1" in result.metrics

    def test_pdc_tables(self, fast_config):
        """Test down-conversion emits series, snapshots and all three distributions."""
        result = ScenarioRunner(fast_config).run("pdc")
        assert [table.name for table in result.tables] == [
            "pdc", "pdc_snapshots", "pdc_distribution_a", "pdc_distribution_b", "pdc_distribution_c",
        ]
        pump = result.table("pdc_distribution_a")
        assert pump.columns == ["time_s"] + [f"p_{n}" for n in range(13)]
        assert len(pump) == len(result.table("pdc"))
        for name in ("pdc_distribution_a", "pdc_distribution_b", "pdc_distribution_c"):
            assert result.table(name).rows[0][0] == 0.0
        assert result.table("pdc").columns[-3:] == ["geometric_l1_b", "geometric_l1_c", "poisson_l1_a"]

    def test_avoided_crossing_tables(self, fast_config):
        """Test the scan and spectrum tables carry no records."""
        result = ScenarioRunner(fast_config).run("avoided-crossing")
        assert [table.name for table in result.tables] == ["avoided_crossing", "probe_spectrum"]
        assert result.records == []

    def test_identical_runs_identical_tables(self, fast_config):
        """Test two runs of one config give equal rows."""
        first = ScenarioRunner(fast_config).run("exchange")
        second = ScenarioRunner(fast_config).run("exchange")
        assert first.tables[0].rows == second.tables[0].rows

    def test_records_validated(self, fast_config, mocker):
        """Every record a scenario returns is checked for norm and sector drift."""
        spy = mocker.spy(EvolutionRecord, "validate")
        result = ScenarioRunner(fast_config).run(ScenarioName.JAYNES_CUMMINGS)
        assert spy.call_count == len(result.records) == 2

    def test_drifting_record_rejected(self, fast_config, mocker):
        """A record whose populations no longer sum to one fails the run."""

        def drifting(config):
            outcome = run_energy_exchange(config)
            outcome.record.distributions[Mode.A][-1] *= 0.5
            return outcome

        mocker.patch("trilin.scenarios.runner.run_energy_exchange", side_effect=drifting)
        with pytest.raises(PhysicsError) as excinfo:
            ScenarioRunner(fast_config).run("exchange")
        assert excinfo.value.error_code == "RECORD_INVALID"
        assert excinfo.value.exit_code == 3

    def test_unknown_scenario(self, fast_config):
        """Test an unknown scenario name."""
        with pytest.raises(ValueError):
            ScenarioRunner(fast_config).run("teleport")
