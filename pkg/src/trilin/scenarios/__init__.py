"""
Scenario module for trilin.

End-to-end reproductions of the avoided crossing, single-phonon exchange,
Jaynes-Cummings and parametric down-conversion experiments.
"""

from .experiments import (
    ExchangeOutcome,
    JaynesCummingsOutcome,
    PdcOutcome,
    jc_reference,
    mode_system,
    rabi_frequency,
    run_avoided_crossing,
    run_energy_exchange,
    run_jaynes_cummings,
    run_pdc_depleted,
    run_probe_spectrum,
    windowed_contrast,
)
from .runner import ScenarioRunner
from .types import EvolutionRecord, ScenarioResult, Table, record_evolution

__all__ = [
    "Table",
    "EvolutionRecord",
    "ScenarioResult",
    "record_evolution",
    "ScenarioRunner",
    "ExchangeOutcome",
    "JaynesCummingsOutcome",
    "PdcOutcome",
    "mode_system",
    "rabi_frequency",
    "jc_reference",
    "windowed_contrast",
    "run_avoided_crossing",
    "run_probe_spectrum",
    "run_energy_exchange",
    "run_jaynes_cummings",
    "run_pdc_depleted",
]
