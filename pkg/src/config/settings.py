"""Application settings for plansim.

This module defines application configuration using Pydantic BaseSettings,
allowing configuration from environment variables and config files.
"""

import logging
from typing import Literal, Optional

from pydantic import ConfigDict, Field, field_validator
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Application settings with validation.

    Settings can be configured via environment variables with the prefix
    'PLANSIM_' or through a .env file.
    """

    # Chain Settings
    steps_per_district: int = Field(
        default=50,
        ge=1,
        le=100000,
        description="Recombination steps per district (chain length is this times m)",
    )

    # Ensemble Settings
    default_jobs: int = Field(
        default=1,
        ge=1,
        le=512,
        description="Worker count used when --jobs is not given",
    )
    ensemble_executor: Literal["process", "thread"] = Field(
        default="process",
        description="Executor backing parallel chains and pairwise scoring",
    )
    ensemble_trees_per_step: int = Field(
        default=8,
        ge=1,
        le=1000,
        description="Spanning trees drawn per step by ensemble chains when not given",
    )

    # Similarity Settings
    brute_force_max_columns: int = Field(
        default=9,
        ge=1,
        le=10,
        description="Largest column count accepted by the factorial assignment oracle",
    )
    tie_tolerance: float = Field(
        default=1e-12,
        ge=0.0,
        le=1e-6,
        description="Relative tolerance when testing assignments for equal optimal weight",
    )

    # Reporting Settings
    histogram_bins: int = Field(
        default=40,
        ge=1,
        le=10000,
        description="Default number of uniform histogram bins over [0, 1]",
    )
    score_decimals: int = Field(
        default=3,
        ge=0,
        le=17,
        description="Decimals used for human-readable score output",
    )

    # Logging Configuration
    log_level: str = Field(
        default="WARNING",
        description="Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)",
    )
    log_file: Optional[str] = Field(
        default=None,
        description="Path to log file (None for console only)",
    )
    log_format: str = Field(
        default="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        description="Log message format",
    )
    log_date_format: str = Field(
        default="%Y-%m-%d %H:%M:%S",
        description="Log date format",
    )

    # Application Settings
    app_name: str = Field(
        default="plansim",
        description="Application name",
    )
    app_version: str = Field(
        default="1.0.0",
        description="Application version",
    )

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        """Validate log level.

        Raises:
            ValueError: If log level is invalid
        """
        valid_levels = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
        v_upper = v.upper()
        if v_upper not in valid_levels:
            raise ValueError(f"Invalid log level: {v}. Must be one of {valid_levels}")
        return v_upper

    def get_log_level_int(self) -> int:
        """Get logging level as integer constant."""
        return getattr(logging, self.log_level)

    def default_steps(self, districts: int) -> int:
        """Chain length for an m-district ensemble (steps_per_district * m)."""
        return self.steps_per_district * districts

    model_config = ConfigDict(
        env_prefix="PLANSIM_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
    )


# Global settings instance
_settings: Optional[Settings] = None


def get_settings() -> Settings:
    """Get the global settings instance, creating it on first use."""
    global _settings
    if _settings is None:
        _settings = Settings()
    return _settings
