"""Application configuration using pydantic-settings.

This module centralizes all runtime configuration using environment variables
with type validation and defaults. Algorithm tolerances are not settings: they
travel with each call in the per-module config models.
"""

import os
from functools import lru_cache

from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Runtime settings loaded from environment variables.

    Environment variables can be set directly or via a .env file.
    """

    # Application metadata
    APP_NAME: str = "ttspin"
    APP_VERSION: str = "0.1.0"
    LOG_LEVEL: str = "INFO"

    # Worker concurrency for spectrum grid points (0 = one per CPU)
    TTSPIN_THREADS: int = 0

    # Largest dense array to_dense() will materialize (entries)
    TTSPIN_DENSE_MAX_ENTRIES: int = 2**24

    # Dense oracle caps
    TTSPIN_MAX_HILBERT_SPINS: int = 12
    TTSPIN_MAX_LIOUVILLE_SPINS: int = 7

    # Seed for every random initialisation (enrichment, initial guesses)
    TTSPIN_SEED: int = 20140618

    model_config = {
        "env_file": ".env",
        "env_file_encoding": "utf-8",
        "case_sensitive": True,
        "extra": "ignore",
    }

    def resolved_threads(self) -> int:
        """Return the effective worker count.

        Returns:
            int: TTSPIN_THREADS, or the CPU count when it is 0.
        """
        if self.TTSPIN_THREADS > 0:
            return self.TTSPIN_THREADS
        return os.cpu_count() or 1


@lru_cache
def get_settings() -> Settings:
    """Get cached application settings.

    Uses lru_cache to avoid re-reading environment variables on every call.

    Returns:
        Settings: Application configuration instance.
    """
    return Settings()
