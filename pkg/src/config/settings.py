"""
Application settings and configuration
"""

from functools import lru_cache
from typing import List, Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


def _default_m_schedule() -> List[float]:
    return [float(2**k) for k in range(1, 15)]


class Settings(BaseSettings):
    """Application settings"""

    model_config = SettingsConfigDict(
        env_prefix="ERGOGRAPH_", env_file=".env", env_file_encoding="utf-8", extra="ignore"
    )

    # Application
    environment: str = Field(default="development")
    log_level: str = Field(default="WARNING")
    log_file: Optional[str] = Field(default=None)
    max_workers: int = Field(default=1, ge=1)

    # Randomness
    seed: Optional[int] = Field(default=None)
    default_seed: int = Field(default=20240601)

    # Chain validation and structure
    stochastic_tol: float = Field(default=1e-9, ge=0.0)
    balance_tol: float = Field(default=1e-8, ge=0.0)
    truncation_boundary: str = Field(default="reflect_to_last")

    # Spectrum and gaps
    unit_eigen_tol: float = Field(default=1e-7, gt=0.0)
    boundary_tol: float = Field(default=1e-7, gt=0.0)
    gelfand_n_max: int = Field(default=4096, ge=2)
    gelfand_tol: float = Field(default=1e-3, gt=0.0)
    tv_bound_slack: float = Field(default=1e-12, ge=0.0)
    uniform_rate_n_max: int = Field(default=2048, ge=2)

    # Drift and minorization
    drift_tol: float = Field(default=1e-9, ge=0.0)
    eps_min: float = Field(default=1e-6, gt=0.0)
    small_set_m_max: int = Field(default=64, ge=1)
    certificate_n_max: int = Field(default=128, ge=1)

    # Lyapunov synthesis
    theta_safety: float = Field(default=0.9, gt=0.0, lt=1.0)
    ladder_theta_safety: float = Field(default=0.45, gt=0.0, lt=1.0)
    theta_cap: float = Field(default=1.0, gt=0.0)
    ladder_rungs: int = Field(default=8, ge=1)
    m_schedule: List[float] = Field(default_factory=_default_m_schedule)
    pi_min: float = Field(default=0.0, ge=0.0)
    solve_refine_tol: float = Field(default=1e-10, gt=0.0)

    # Simulation and diagnostics
    hitting_horizon: int = Field(default=10_000_000, ge=1)
    replicates: int = Field(default=1000, ge=2)
    autocorr_n_max: int = Field(default=100, ge=1)
    bounded_spread: float = Field(default=0.05, gt=0.0)
    growing_ratio: float = Field(default=1.25, gt=1.0)


@lru_cache()
def get_settings() -> Settings:
    """Get cached settings instance"""
    return Settings()
