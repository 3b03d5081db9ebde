"""
Run configuration documents for trilin scenarios.

A run config is a JSON (or YAML) document validated into ScenarioConfig.
Frequencies are ordinary frequencies in kHz everywhere in files and flags;
TrapSettings.to_trap_config() is the single place they become rad/s.
Precedence is CLI flags > file values > built-in defaults.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from ..shared import ConfigurationError, JSONData, PropagatorMethod, khz_to_rad_s

logger = logging.getLogger(__name__)


class TrapSettings(BaseModel):
    """Trap frequencies in kHz, ion mass in u and charge in e."""

    model_config = ConfigDict(extra='forbid')

    omega_x_khz: float = Field(default=1056.0, description="x-radial single-ion frequency")
    omega_y_khz: float = Field(default=976.0, description="y-radial single-ion frequency")
    omega_z_khz: float = Field(default=587.0, description="Axial single-ion frequency")
    mass_u: float = Field(default=171.0, description="Ion mass in atomic mass units")
    charge_e: float = Field(default=1.0, description="Ion charge in elementary charges")
    delta_khz: Optional[float] = Field(
        default=None,
        description=(
            "Detuning override. The mode report shows the trap's own detuning "
            "when None, while the dynamics run on resonance (delta = 0)"
        ),
    )
    use_resonance_ratio: bool = Field(
        default=False, description="Replace omega_x by omega_z / resonance_ratio()"
    )

    @field_validator('omega_x_khz', 'omega_y_khz', 'omega_z_khz', 'mass_u')
    @classmethod
    def validate_positive(cls, v: float) -> float:
        if not v > 0:
            raise ValueError('Trap frequencies and mass must be positive')
        return v

    @field_validator('charge_e')
    @classmethod
    def validate_charge(cls, v: float) -> float:
        if v == 0:
            raise ValueError('Ion charge must be nonzero')
        return v

    def to_trap_config(self):
        """Convert to a TrapConfig in SI units."""
        from ..modes import TrapConfig, resonant_trap

        try:
            if self.use_resonance_ratio:
                return resonant_trap(
                    khz_to_rad_s(self.omega_z_khz),
                    mass_u=self.mass_u,
                    charge_e=self.charge_e,
                    omega_y=khz_to_rad_s(self.omega_y_khz),
                )
            return TrapConfig.from_khz(
                self.omega_x_khz,
                self.omega_y_khz,
                self.omega_z_khz,
                mass_u=self.mass_u,
                charge_e=self.charge_e,
            )
        except ValidationError as e:
            fields = [f"trap.{name}" for name in validation_fields(e)]
            raise ConfigurationError(f"Invalid trap: {e}", fields=fields)

    @property
    def delta_override(self) -> Optional[float]:
        """Detuning override in rad/s."""
        return None if self.delta_khz is None else khz_to_rad_s(self.delta_khz)


class TruncationSettings(BaseModel):
    """Fock cutoffs per mode."""

    model_config = ConfigDict(extra='forbid')

    n_max_a: int = Field(default=10, ge=1)
    n_max_b: int = Field(default=10, ge=1)
    n_max_c: int = Field(default=10, ge=1)

    def to_truncation(self):
        from ..hilbert import Truncation

        return Truncation(n_max_a=self.n_max_a, n_max_b=self.n_max_b, n_max_c=self.n_max_c)


class PropagatorSettings(BaseModel):
    """Time propagation back end."""

    model_config = ConfigDict(extra='forbid')

    method: PropagatorMethod = Field(default=PropagatorMethod.DENSE)
    tolerance: float = Field(default=1e-10, gt=0)
    krylov_dim: int = Field(default=30, ge=2)
    max_steps: int = Field(default=100_000, ge=1)


class ObserveSettings(BaseModel):
    """Sideband detection parameters."""

    model_config = ConfigDict(extra='forbid')

    omega0_khz: float = Field(default=10.0, gt=0, description="Carrier sideband Rabi frequency")
    gamma0_per_s: float = Field(default=0.0, ge=0, description="Envelope decay rate of n = 0")
    n_cut: int = Field(default=8, ge=0)
    points: int = Field(default=200, ge=2)
    duration_us: float = Field(default=500.0, gt=0)


class AvoidedCrossingSettings(BaseModel):
    """Detuning scan of the single-excitation sector."""

    model_config = ConfigDict(extra='forbid')

    delta_min_xi: float = Field(default=-5.0, description="Scan start in units of xi")
    delta_max_xi: float = Field(default=5.0, description="Scan end in units of xi")
    points: int = Field(default=101, ge=1)
    probe_khz: float = Field(default=1.0, gt=0, description="Blue-sideband probe Rabi frequency")
    probe_duration_ms: float = Field(default=2.0, gt=0)
    probe_points: int = Field(default=161, ge=1)

    @field_validator('delta_max_xi')
    @classmethod
    def validate_range(cls, v: float, info) -> float:
        lower = info.data.get('delta_min_xi')
        if lower is not None and v < lower:
            raise ValueError('delta_max_xi must not be below delta_min_xi')
        return v


class ExchangeSettings(BaseModel):
    """Single-phonon exchange after a quench from the park detuning."""

    model_config = ConfigDict(extra='forbid')

    cycles: float = Field(default=3.0, gt=0, description="Exchange cycles of n_a")
    points: int = Field(default=301, ge=2)
    park_delta_khz: float = Field(default=-44.0, description="Detuning while preparing |100>")
    park_time_us: float = Field(default=0.0, ge=0)


class JaynesCummingsSettings(BaseModel):
    """Fock and coherent field-state runs."""

    model_config = ConfigDict(extra='forbid')

    fock: list[int] = Field(default_factory=lambda: [0, 1, 2, 3, 4])
    coherent_nbar: Optional[float] = Field(default=1.8)
    coherent_n_max_c: int = Field(default=16, ge=1)
    cycles: float = Field(default=3.0, gt=0, description="Cycles of the n = 0 Rabi oscillation")
    coherent_cycles: float = Field(default=12.0, gt=0)
    points: int = Field(default=401, ge=2)

    @field_validator('fock')
    @classmethod
    def validate_fock(cls, v: list[int]) -> list[int]:
        if any(n < 0 for n in v):
            raise ValueError('Fock numbers must be non-negative')
        return v

    @field_validator('coherent_nbar')
    @classmethod
    def validate_nbar(cls, v: Optional[float]) -> Optional[float]:
        if v is not None and v < 0:
            raise ValueError('Coherent mean phonon number must be non-negative')
        return v


class PdcSettings(BaseModel):
    """Parametric down-conversion from a coherent pump."""

    model_config = ConfigDict(extra='forbid')

    pump_nbar: float = Field(default=3.7, ge=0)
    xi_tau: list[float] = Field(default_factory=lambda: [0.2, 0.5, 1.0, 2.0])
    points: int = Field(default=201, ge=2)
    xi_tau_max: float = Field(default=2.0, gt=0)
    n_max: int = Field(default=25, ge=1)
    truncation: Optional[TruncationSettings] = Field(
        default=None, description="Explicit cutoffs; overrides the uniform n_max"
    )
    tomography: bool = Field(default=False, description="Reconstruct b and c by sideband tomography")

    @field_validator('xi_tau')
    @classmethod
    def validate_grid(cls, v: list[float]) -> list[float]:
        if not v:
            raise ValueError('xi_tau grid must not be empty')
        if any(x < 0 for x in v):
            raise ValueError('xi_tau values must be non-negative')
        return v


class ScenarioConfig(BaseModel):
    """Complete configuration of one scenario run."""

    model_config = ConfigDict(extra='forbid')

    trap: TrapSettings = Field(default_factory=TrapSettings)
    truncation: TruncationSettings = Field(default_factory=TruncationSettings)
    propagator: PropagatorSettings = Field(default_factory=PropagatorSettings)
    observe: ObserveSettings = Field(default_factory=ObserveSettings)
    avoided_crossing: AvoidedCrossingSettings = Field(default_factory=AvoidedCrossingSettings)
    exchange: ExchangeSettings = Field(default_factory=ExchangeSettings)
    jc: JaynesCummingsSettings = Field(default_factory=JaynesCummingsSettings)
    pdc: PdcSettings = Field(default_factory=PdcSettings)

    def resolved(self) -> JSONData:
        """JSON-ready dump echoed into the run manifest."""
        return self.model_dump(mode="json")


def _merge(base: Dict[str, Any], overrides: Dict[str, Any]) -> Dict[str, Any]:
    merged = dict(base)
    for key, value in overrides.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        elif value is not None:
            merged[key] = value
    return merged


def read_config_document(path: Union[str, Path]) -> Dict[str, Any]:
    """
    Parse a JSON or YAML config file into a dictionary.

    Raises:
        ConfigurationError: If the file is missing or malformed
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigurationError(f"Config file not found: {path}")
    try:
        text = path.read_text(encoding="utf-8")
        if path.suffix.lower() in (".yaml", ".yml"):
            document = yaml.safe_load(text) or {}
        else:
            document = json.loads(text)
    except (json.JSONDecodeError, yaml.YAMLError) as e:
        raise ConfigurationError(f"Cannot parse config file {path}: {e}")
    if not isinstance(document, dict):
        raise ConfigurationError(f"Config file {path} must hold a mapping at top level")
    return document


def validation_fields(error: ValidationError) -> list[str]:
    """Dotted field paths named by a pydantic ValidationError."""
    return [".".join(str(part) for part in item["loc"]) for item in error.errors()]


def load_run_config(
    path: Optional[Union[str, Path]] = None,
    overrides: Optional[Dict[str, Any]] = None,
) -> ScenarioConfig:
    """
    Resolve a ScenarioConfig from defaults, an optional file and overrides.

    Args:
        path: JSON/YAML document; None uses built-in defaults only
        overrides: Nested values from CLI flags; None entries are ignored

    Raises:
        ConfigurationError: If any value fails validation
    """
    document: Dict[str, Any] = read_config_document(path) if path else {}
    if overrides:
        document = _merge(document, overrides)
    try:
        config = ScenarioConfig.model_validate(document)
    except ValidationError as e:
        fields = validation_fields(e)
        raise ConfigurationError(f"Invalid run configuration: {', '.join(fields)}", fields=fields)
    logger.debug(f"Resolved run configuration from {path or 'defaults'}")
    return config
