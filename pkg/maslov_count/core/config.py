"""Application configuration management."""

from functools import lru_cache
from pathlib import Path

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Process-wide numeric defaults loaded from environment variables.

    Every field can be set with a ``MASLOV_`` prefixed variable, either in the
    environment or in a ``.env`` file next to the working directory.
    """

    # Linear algebra tolerances
    rank_tol: float = Field(default=1e-8, gt=0)
    lagrangian_tol: float = Field(default=1e-8, gt=0)
    unitary_tol: float = Field(default=1e-10, gt=0)
    eig_tol: float = Field(default=1e-8, gt=0)
    conditioning_cap: float = Field(default=1e10, gt=1)
    hyperbolicity_margin: float = Field(default=1e-6, gt=0)

    # Integration
    rtol: float = Field(default=1e-11, gt=0)
    atol: float = Field(default=1e-13, gt=0)
    grid_points: int = Field(default=2001, ge=11)
    continuity_cap: float = Field(default=0.5, gt=0, le=1)
    growth_margin: float = Field(default=4.0, gt=0)

    # Tracking
    x_refine_depth: int = Field(default=20, ge=1)
    lambda_refine_depth: int = Field(default=48, ge=1)
    x_locate_tol: float = Field(default=1e-10, gt=0)
    lambda_locate_tol: float = Field(default=1e-9, gt=0)
    top_shelf_points: int = Field(default=41, ge=3)

    # Truncation
    truncation_tol: float = Field(default=1e-8, gt=0)
    c_floor: float = Field(default=2.0, gt=0)
    c_cap: float = Field(default=60.0, gt=0)
    transversality_gap_min: float = Field(default=1e-6, gt=0)

    # Runtime
    workers: int = Field(default=1, ge=1)
    output_directory: Path = Path("output")

    model_config = SettingsConfigDict(
        env_prefix="MASLOV_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
    )


@lru_cache()
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()
