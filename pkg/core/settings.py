"""
Runtime settings.

Values come from the environment (optionally through a .env file) and only
provide defaults; command-line flags always win.
"""

import os
from functools import lru_cache

from dotenv import load_dotenv
from pydantic import BaseModel, Field


class Settings(BaseModel):
    """Process-wide defaults."""

    log_level: str = Field("INFO", description="Root logging level for the CLI")
    default_tol: float = Field(1e-10, gt=0, description="Default relative tolerance")
    max_workers: int = Field(4, ge=1, description="Concurrent grid points / checks")
    seed: int = Field(20240611, ge=0, description="Seed for stochastic modes")
    term_cap: int = Field(400, ge=8, description="Maximum number of j-series terms")


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Load settings once per process."""
    load_dotenv()
    return Settings(
        log_level=os.getenv("WORM_LOG_LEVEL", "INFO").upper(),
        default_tol=float(os.getenv("WORM_DEFAULT_TOL", "1e-10")),
        max_workers=int(os.getenv("WORM_MAX_WORKERS", "4")),
        seed=int(os.getenv("WORM_SEED", "20240611")),
        term_cap=int(os.getenv("WORM_TERM_CAP", "400")),
    )
