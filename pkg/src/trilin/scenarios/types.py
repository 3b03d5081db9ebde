"""
Result containers produced by scenario runs.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Sequence

import numpy as np

from ..hilbert import LEAKAGE_LIMIT, StateVector, populations
from ..shared import FloatArray, Mode, PhysicsError, ScenarioName, summarize_leakage


@dataclass
class Table:
    """Named columns and numeric rows; the unit written to one CSV."""

    name: str
    columns: list[str]
    rows: list[list[float]] = field(default_factory=list)

    def add_row(self, values: Sequence[float]) -> None:
        if len(values) != len(self.columns):
            raise ValueError(
                f"Table '{self.name}' has {len(self.columns)} columns, got {len(values)} values"
            )
        self.rows.append([float(v) for v in values])

    def column(self, name: str) -> FloatArray:
        position = self.columns.index(name)
        return np.array([row[position] for row in self.rows])

    def __len__(self) -> int:
        return len(self.rows)


@dataclass(frozen=True, eq=False)
class EvolutionRecord:
    """
    Observables of one evolution sampled on a time grid.

    `distributions[mode]` has one row per time; `sector_weights` one column
    per sector of the basis.
    """

    label: str
    times: FloatArray
    distributions: Dict[Mode, FloatArray] = field(repr=False)
    sector_weights: FloatArray = field(repr=False)
    leakage: FloatArray = field(repr=False)

    @property
    def means(self) -> Dict[Mode, FloatArray]:
        return {
            mode: table @ np.arange(table.shape[1], dtype=float)
            for mode, table in self.distributions.items()
        }

    def mean(self, mode: Mode) -> FloatArray:
        return self.means[mode]

    @property
    def flagged(self) -> bool:
        """Whether truncation leakage ever exceeded the limit."""
        return bool(np.max(self.leakage, initial=0.0) > LEAKAGE_LIMIT)

    def validate(self, tolerance: float = 1e-10) -> None:
        """
        Check that populations stay normalized and sector weights constant.

        Raises:
            PhysicsError: If either check fails
        """
        for mode, table in self.distributions.items():
            drift = float(np.max(np.abs(table.sum(axis=1) - 1.0)))
            if drift > tolerance:
                raise PhysicsError(
                    f"Mode {mode.value} populations drift from 1 by {drift:.3e} in '{self.label}'",
                    "RECORD_INVALID",
                    {"mode": mode.value, "drift": drift},
                )
        drift = float(np.max(np.abs(self.sector_weights - self.sector_weights[0])))
        if drift > tolerance:
            raise PhysicsError(
                f"Sector weights drift by {drift:.3e} in '{self.label}'",
                "RECORD_INVALID",
                {"drift": drift},
            )

    def means_table(self, name: Optional[str] = None, reference: Optional[FloatArray] = None) -> Table:
        """time_s, mean_a, mean_b, mean_c, leakage (+ reference_a)."""
        columns = ["time_s", "mean_a", "mean_b", "mean_c", "leakage"]
        if reference is not None:
            columns.append("reference_a")
        table = Table(name or self.label, columns)
        means = self.means
        for i, t in enumerate(self.times):
            row = [t, means[Mode.A][i], means[Mode.B][i], means[Mode.C][i], self.leakage[i]]
            if reference is not None:
                row.append(reference[i])
            table.add_row(row)
        return table

    def distribution_table(self, mode: Mode, name: Optional[str] = None) -> Table:
        """time_s, p_0 .. p_n_max of one mode."""
        probabilities = self.distributions[mode]
        columns = ["time_s"] + [f"p_{n}" for n in range(probabilities.shape[1])]
        table = Table(name or f"{self.label}_{mode.value}", columns)
        for t, row in zip(self.times, probabilities):
            table.add_row([t, *row])
        return table


def record_evolution(label: str, times: Sequence[float], states: Sequence[StateVector]) -> EvolutionRecord:
    """Collect per-mode populations, sector weights and leakage of a state series."""
    if len(times) != len(states):
        raise ValueError("Need one state per time")
    distributions = {
        mode: np.array([populations(state, mode).probabilities for state in states])
        for mode in Mode
    }
    return EvolutionRecord(
        label=label,
        times=np.asarray(times, dtype=float),
        distributions=distributions,
        sector_weights=np.array([state.sector_weights() for state in states]),
        leakage=np.array([state.leakage for state in states]),
    )


@dataclass
class ScenarioResult:
    """Everything a scenario run produced, ready for the writers."""

    name: ScenarioName
    tables: list[Table] = field(default_factory=list)
    records: list[EvolutionRecord] = field(default_factory=list)
    metrics: Dict[str, Any] = field(default_factory=dict)

    @property
    def leakage_summary(self) -> Dict[str, Any]:
        values = [float(v) for record in self.records for v in record.leakage]
        summary: Dict[str, Any] = dict(summarize_leakage(values))
        summary["flagged"] = any(record.flagged for record in self.records)
        return summary

    def table(self, name: str) -> Table:
        for table in self.tables:
            if table.name == name:
                return table
        raise KeyError(f"No table named '{name}' in {self.name.value} result")
