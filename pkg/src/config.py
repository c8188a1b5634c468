"""
Environment-driven defaults for the radical toolkit
"""

import logging
import os
from dataclasses import dataclass
from typing import Optional

from dotenv import load_dotenv

from .errors import ConfigurationError

load_dotenv()

# Constants
DEFAULT_TOLERANCE = 1e-8
DEFAULT_RETRIES = 5
DEFAULT_SEED = 0
DEFAULT_WORKERS = 3
RANDOM_BOUND = 2**16


@dataclass(frozen=True)
class Settings:
    """Resolved configuration values"""

    seed: int = DEFAULT_SEED
    tolerance: float = DEFAULT_TOLERANCE
    retries: int = DEFAULT_RETRIES
    workers: int = DEFAULT_WORKERS
    log_file: Optional[str] = None
    log_level: str = "INFO"


def _read_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise ConfigurationError(f"{name} must be an integer, got {raw!r}")


def _read_float(name: str, default: float) -> float:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return float(raw)
    except ValueError:
        raise ConfigurationError(f"{name} must be a number, got {raw!r}")


def _validate(settings: Settings) -> None:
    """Validate that the resolved configuration is usable."""
    if settings.tolerance <= 0:
        raise ConfigurationError("RADICAL_TOLERANCE must be positive")
    if settings.retries < 0:
        raise ConfigurationError("RADICAL_RETRIES must be non-negative")
    if settings.workers < 1:
        raise ConfigurationError("RADICAL_WORKERS must be at least 1")
    if not isinstance(logging.getLevelName(settings.log_level), int):
        raise ConfigurationError(f"Unknown log level {settings.log_level!r}")


def load_settings() -> Settings:
    """
    Read the RADICAL_* environment variables.

    Returns:
        Settings with environment overrides applied on top of the defaults
    """
    settings = Settings(
        seed=_read_int("RADICAL_SEED", DEFAULT_SEED),
        tolerance=_read_float("RADICAL_TOLERANCE", DEFAULT_TOLERANCE),
        retries=_read_int("RADICAL_RETRIES", DEFAULT_RETRIES),
        workers=_read_int("RADICAL_WORKERS", DEFAULT_WORKERS),
        log_file=os.getenv("RADICAL_LOG_FILE") or None,
        log_level=(os.getenv("RADICAL_LOG_LEVEL") or "INFO").upper(),
    )
    _validate(settings)
    return settings
