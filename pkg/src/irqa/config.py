"""irqa — Centralized typed configuration.

All values can be overridden via environment variables with the IRQA_ prefix.
The default manifest path is read from IRQA_CONFIG.

Usage:
    from irqa.config import get_settings
    settings = get_settings()
"""

from __future__ import annotations

from functools import lru_cache

from pydantic import Field
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Typed, validated application settings."""

    model_config = {"env_prefix": "IRQA_", "env_file": ".env", "extra": "ignore"}

    # --- Core ---
    env: str = Field("development", description="Runtime environment")
    version: str = Field("1.0.0", description="Application version")
    log_level: str = Field("INFO", description="Log level")

    # --- Text analysis ---
    stopword_file: str | None = Field(None, description="Stopword list; shipped SMART list when unset")
    titles_file: str | None = Field(None, description="Title/appellation whitelist; shipped list when unset")
    strip_numbers: bool = Field(True, description="Drop all-digit tokens during analysis")

    # --- Answer keys ---
    regex_ignore_case: bool = Field(False, description="Evaluate answer patterns case-insensitively")

    # --- Retrieval ---
    bm25_k1: float = Field(1.2, gt=0.0, description="BM25 term-frequency saturation")
    bm25_b: float = Field(0.75, ge=0.0, le=1.0, description="BM25 length normalisation")
    default_depth: int = Field(20, ge=1, description="Default retrieval depth n")

    # --- Execution ---
    workers: int = Field(1, ge=1, description="Worker threads for per-question work")
    output_dir: str = Field("./irqa-out", description="Directory for pipeline artifacts")
    config: str | None = Field(None, description="Default run manifest path")


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Return a cached singleton of the application settings."""
    return Settings()
