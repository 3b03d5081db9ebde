"""
Process-level configuration for trilin.

Uses Pydantic for validation and type safety. Values come from environment
variables prefixed with TRILIN_ (optionally via a .env file).
"""

import os
from typing import Literal, Optional

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from ..shared import ConfigurationError

# Load environment variables
load_dotenv()

DEFAULT_DIMENSION_CAP = 5_000_000


class OutputSettings(BaseModel):
    """Output-specific configuration settings."""

    model_config = ConfigDict(extra='ignore')

    directory: str = Field(default="results", description="Default output directory")
    manifest_name: str = Field(default="manifest.json", description="Run manifest file name")

    @field_validator('manifest_name')
    @classmethod
    def validate_manifest_name(cls, v: str) -> str:
        if not v.endswith('.json'):
            raise ValueError('Manifest file name must end in .json')
        return v


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name, str(default))
    try:
        return int(raw)
    except ValueError:
        raise ConfigurationError(f"{name} must be an integer, got '{raw}'", fields=[name])


class AppSettings(BaseSettings):
    """
    Main application settings.

    Consolidates process-wide concerns: logging, parallelism and limits.
    """

    model_config = SettingsConfigDict(
        env_prefix='TRILIN_',
        env_file='.env',
        env_file_encoding='utf-8',
        case_sensitive=False,
        extra='ignore'
    )

    # Application Metadata
    app_name: str = Field(default="trilin", description="Application name")
    version: str = Field(default="0.4.0", description="Application version")

    # Logging
    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"] = Field(
        default="INFO",
        description="Logging level"
    )

    # Numerics
    threads: int = Field(default=1, description="Upper bound on worker threads")
    dimension_cap: int = Field(
        default=DEFAULT_DIMENSION_CAP,
        description="Hard cap on the truncated Fock space dimension"
    )

    output: OutputSettings = Field(default_factory=OutputSettings)

    @field_validator('threads')
    @classmethod
    def validate_threads(cls, v: int) -> int:
        if v < 1:
            raise ValueError('TRILIN_THREADS must be at least 1')
        return v

    @field_validator('dimension_cap')
    @classmethod
    def validate_dimension_cap(cls, v: int) -> int:
        if v < 8:
            raise ValueError('Dimension cap must allow at least the (1,1,1) space')
        return v

    @classmethod
    def from_env(cls) -> "AppSettings":
        """
        Create settings from environment variables.

        Maps environment variables to nested configuration structure.

        Raises:
            ConfigurationError: If a TRILIN_* value is malformed or out of range
        """
        try:
            return cls(
                log_level=os.getenv("TRILIN_LOG_LEVEL", "INFO").upper(),
                threads=_env_int("TRILIN_THREADS", 1),
                dimension_cap=_env_int("TRILIN_DIMENSION_CAP", DEFAULT_DIMENSION_CAP),
                output=OutputSettings(
                    directory=os.getenv("TRILIN_OUTPUT_DIR", "results"),
                ),
            )
        except ValidationError as e:
            names = [f"TRILIN_{error['loc'][0]}".upper() for error in e.errors() if error['loc']]
            raise ConfigurationError(f"Invalid {', '.join(names)}: {e}", fields=names)


# Global settings instance
settings: Optional[AppSettings] = None


def get_settings() -> AppSettings:
    """
    Get global settings instance.

    Creates settings from environment if not already initialized.
    """
    global settings
    if settings is None:
        settings = AppSettings.from_env()
    return settings


def reset_settings() -> None:
    """Reset global settings instance (useful for testing)."""
    global settings
    settings = None
