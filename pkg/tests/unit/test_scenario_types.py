"""
Unit tests for scenario result containers.
"""

import numpy as np
import pytest

from trilin.dynamics import build_hamiltonian, evolve_series
from trilin.hilbert import fock_state
from trilin.scenarios import EvolutionRecord, ScenarioResult, Table, record_evolution
from trilin.shared import Mode, PhysicsError, ScenarioName


@pytest.fixture
def exchange_record(small_basis):
    hamiltonian = build_hamiltonian(small_basis, 1.0, 0.0)
    times = np.linspace(0.0, 3.0, 31)
    states = evolve_series(hamiltonian, fock_state(small_basis, 1, 0, 0), times)
    return record_evolution("exchange", times, states)


@pytest.mark.unit
class TestTable:
    """Test named numeric tables."""

    def test_add_row_coerces_floats(self):
        """Test rows are stored as plain Python floats."""
        table = Table("t", ["n", "p"])
        table.add_row([1, np.float64(0.5)])
        assert table.rows == [[1.0, 0.5]]
        assert type(table.rows[0][0]) is float
        assert len(table) == 1

    def test_add_row_checks_width(self):
        """Test a row must match the column count."""
        with pytest.raises(ValueError):
            Table("t", ["n", "p"]).add_row([1.0])

    def test_column(self):
        """Test column extraction by name."""
        table = Table("t", ["n", "p"], [[0.0, 0.25], [1.0, 0.75]])
        np.testing.assert_array_equal(table.column("p"), [0.25, 0.75])


@pytest.mark.unit
class TestEvolutionRecord:
    """Test per-time observables of an evolution."""

    def test_means_follow_exchange(self, exchange_record):
        """Test single-phonon exchange means follow cos^2(t)."""
        np.testing.assert_allclose(
            exchange_record.mean(Mode.A), np.cos(exchange_record.times) ** 2, atol=1e-12
        )
        np.testing.assert_allclose(
            exchange_record.mean(Mode.A) + exchange_record.mean(Mode.B), 1.0, atol=1e-12
        )

    def test_validate_passes(self, exchange_record):
        """Test a clean record validates and is not flagged."""
        exchange_record.validate()
        assert not exchange_record.flagged

    def test_validate_catches_population_drift(self, exchange_record):
        """Test populations that no longer sum to one are rejected."""
        distributions = dict(exchange_record.distributions)
        distributions[Mode.B] = distributions[Mode.B] * 1.01
        broken = EvolutionRecord(
            "broken",
            exchange_record.times,
            distributions,
            exchange_record.sector_weights,
            exchange_record.leakage,
        )
        with pytest.raises(PhysicsError) as excinfo:
            broken.validate()
        assert excinfo.value.error_code == "RECORD_INVALID"
        assert excinfo.value.context["mode"] == "b"

    def test_validate_catches_sector_drift(self, exchange_record):
        """Test a drifting sector weight is rejected."""
        weights = exchange_record.sector_weights.copy()
        weights[-1, 0] += 1e-6
        broken = EvolutionRecord(
            "broken", exchange_record.times, exchange_record.distributions, weights, exchange_record.leakage
        )
        with pytest.raises(PhysicsError):
            broken.validate()

    def test_means_table(self, exchange_record):
        """Test the means table with a reference column."""
        reference = np.cos(exchange_record.times) ** 2
        table = exchange_record.means_table("exchange", reference=reference)
        assert table.columns == ["time_s", "mean_a", "mean_b", "mean_c", "leakage", "reference_a"]
        assert len(table) == 31
        np.testing.assert_allclose(table.column("mean_a"), table.column("reference_a"), atol=1e-12)

    def test_distribution_table(self, exchange_record):
        """Test the default name and columns of a distribution table."""
        table = exchange_record.distribution_table(Mode.C)
        assert table.name == "exchange_c"
        assert table.columns == ["time_s", "p_0", "p_1", "p_2", "p_3"]

    def test_record_needs_one_state_per_time(self, small_basis):
        """Test times and states must pair up."""
        with pytest.raises(ValueError):
            record_evolution("bad", [0.0, 1.0], [fock_state(small_basis, 0, 0, 0)])


@pytest.mark.unit
class TestScenarioResult:
    """Test the aggregated scenario result."""

    def test_leakage_summary(self, exchange_record):
        """Test the leakage summary of a record without leakage."""
        result = ScenarioResult(ScenarioName.EXCHANGE, records=[exchange_record])
        assert result.leakage_summary == {"max": 0.0, "final": 0.0, "flagged": False}

    def test_table_lookup(self):
        """Test table lookup by name."""
        result = ScenarioResult(ScenarioName.PDC, tables=[Table("pdc", ["x"])])
        assert result.table("pdc").name == "pdc"
        with pytest.raises(KeyError):
            result.table("missing")
