"""
Configuration module for trilin.

Process settings from the environment plus validated run-config documents.
"""

from .run_config import (
    AvoidedCrossingSettings,
    ExchangeSettings,
    JaynesCummingsSettings,
    ObserveSettings,
    PdcSettings,
    PropagatorSettings,
    ScenarioConfig,
    TrapSettings,
    TruncationSettings,
    load_run_config,
    read_config_document,
)
from .settings import (
    DEFAULT_DIMENSION_CAP,
    AppSettings,
    OutputSettings,
    get_settings,
    reset_settings,
)

__all__ = [
    "AppSettings",
    "OutputSettings",
    "DEFAULT_DIMENSION_CAP",
    "get_settings",
    "reset_settings",
    "ScenarioConfig",
    "TrapSettings",
    "TruncationSettings",
    "PropagatorSettings",
    "ObserveSettings",
    "AvoidedCrossingSettings",
    "ExchangeSettings",
    "JaynesCummingsSettings",
    "PdcSettings",
    "load_run_config",
    "read_config_document",
]
