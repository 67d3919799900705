"""
Fat-Tail Gini Toolkit: settings.py
Description: Runtime configuration (environment and .env aware)
Version: 1.0.0
"""

# config/settings.py
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application configuration"""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_prefix="GINI_",
        case_sensitive=False,
        extra="ignore",
    )

    # Logging
    log_level: str = Field("INFO", description="Root log level")

    # Experiment execution
    threads: int = Field(1, ge=1, description="Default worker threads for experiments")
    default_seed: int = Field(20240601, ge=0, description="Seed used when a command gets none")

    # Numerics
    special_tol: float = Field(1e-12, gt=0)
    special_max_iter: int = Field(200_000, ge=10)
    quad_tol: float = Field(1e-8, gt=0)
    quad_limit: int = Field(200, ge=10)

    # Tail estimation
    default_epsilon: float = Field(0.01, gt=0)
    moment_terms: int = Field(60, ge=1)
    moment_rel_tol: float = Field(1e-15, ge=0)

    # Direct estimation
    pairwise_block: int = Field(256, ge=1)


# Get global settings instance
settings = Settings()
