"""
Configuration management for the dispersion solvers.
Loads settings from environment variables (prefix ``DISPERSION_``) and ``.env``.
"""

from functools import lru_cache

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings loaded from environment variables."""

    # Numerics
    eps: float = 1e-9
    rel_eps: float = 1e-12
    bisection_max_iter: int = 200
    debug_checks: bool = False

    # Oracle budget defaults
    oracle_max_n: int = 10
    oracle_max_k: int = 12
    oracle_max_nodes: int = 2_000_000

    # CLI
    bench_workers: int = 1
    svg_width: int = 800
    log_level: str = "INFO"
    log_dir: str = "logs"
    log_to_file: bool = True

    # Application Info
    app_name: str = "Dispersion Solvers"
    app_version: str = "1.0.0"

    model_config = SettingsConfigDict(
        env_prefix="DISPERSION_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )


@lru_cache()
def get_settings() -> Settings:
    """Get cached application settings."""
    return Settings()


def resolve_eps(eps: float | None = None) -> float:
    """Return ``eps`` when given, otherwise the configured absolute tolerance."""
    return get_settings().eps if eps is None else eps
