from __future__ import annotations

import os
from functools import lru_cache
from pathlib import Path

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


ROOT_DIR = Path(__file__).resolve().parents[2]


class Settings(BaseSettings):
    """Environment-backed defaults; every field can be overridden with RIC_BOUNDS_<NAME>."""

    model_config = SettingsConfigDict(env_prefix="RIC_BOUNDS_", env_file=".env", extra="ignore")

    # upper bound on worker threads; --threads can only lower it
    threads: int = Field(default_factory=lambda: os.cpu_count() or 1)

    solver_tolerance: float = 1e-12
    solver_max_iterations: int = 200
    solver_bracket_growth: float = 2.0

    exhaustive_cap: int = 1_000_000
    matrix_entry_cap: int = 50_000_000
    jacobi_tolerance: float = 1e-12
    jacobi_max_sweeps: int = 64

    gamma_floor: float = 4.0
    gamma_ceiling: float = 1e8

    data_dir: Path = ROOT_DIR / "data"
    log_dir: Path = ROOT_DIR / "logs"
    run_log_enabled: bool = True
    run_log_max_entries: int = 1000
    run_log_max_days: int = 7


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    return Settings()
