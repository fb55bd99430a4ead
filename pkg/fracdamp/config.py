"""Runtime configuration from FRACDAMP_* environment variables and a local .env.

Environment:
    FRACDAMP_TOL=1e-10               # decay quadrature relative tolerance
    FRACDAMP_ABS_TOL=1e-14           # decay quadrature absolute tolerance
    FRACDAMP_MAX_SUBDIVISIONS=2000   # QUADPACK subinterval limit per piece
    FRACDAMP_MAX_STEPS=1000000       # oracle memory cap (time steps)
    FRACDAMP_WORKERS=1               # sweep thread pool size
    FRACDAMP_LOG_LEVEL=WARNING       # CLI logging level
"""

from __future__ import annotations

import logging
import math
import os
import re
from pathlib import Path

logger = logging.getLogger(__name__)

DEFAULT_REL_TOL = 1e-10
DEFAULT_ABS_TOL = 1e-14
DEFAULT_MAX_SUBDIVISIONS = 2000
DEFAULT_MAX_STEPS = 1_000_000
DEFAULT_WORKERS = 1
DEFAULT_LOG_LEVEL = "WARNING"


def env_path() -> Path:
    """Return the .env file path in the current working directory."""
    return Path.cwd() / ".env"


def read_config() -> dict[str, str]:
    """Read all FRACDAMP_* variables from the .env file."""
    config: dict[str, str] = {}
    path = env_path()
    if not path.exists():
        return config
    for line in path.read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        match = re.match(r"^(FRACDAMP_[A-Z0-9_]*)=(.*)$", line)
        if match:
            config[match.group(1)] = match.group(2).strip().strip("\"'")
    return config


def get_key(key: str) -> str | None:
    """Get a single key value, os.environ first, then .env."""
    if key in os.environ:
        return os.environ[key]
    return read_config().get(key) or None


def _resolve_float(key: str, default: float) -> float:
    raw = get_key(key)
    if raw is None:
        return default
    try:
        value = float(raw)
    except ValueError:
        logger.warning("ignoring %s=%r: not a number", key, raw)
        return default
    if not math.isfinite(value) or value <= 0:
        logger.warning("ignoring %s=%r: must be finite and > 0", key, raw)
        return default
    return value


def _resolve_int(key: str, default: int) -> int:
    raw = get_key(key)
    if raw is None:
        return default
    try:
        value = int(raw)
    except ValueError:
        logger.warning("ignoring %s=%r: not an integer", key, raw)
        return default
    if value < 1:
        logger.warning("ignoring %s=%r: must be >= 1", key, raw)
        return default
    return value


def get_rel_tol(default: float = DEFAULT_REL_TOL) -> float:
    """Resolve FRACDAMP_TOL, with validation and fallback."""
    return _resolve_float("FRACDAMP_TOL", default)


def get_abs_tol(default: float = DEFAULT_ABS_TOL) -> float:
    return _resolve_float("FRACDAMP_ABS_TOL", default)


def get_max_subdivisions(default: int = DEFAULT_MAX_SUBDIVISIONS) -> int:
    return _resolve_int("FRACDAMP_MAX_SUBDIVISIONS", default)


def get_max_steps(default: int = DEFAULT_MAX_STEPS) -> int:
    return _resolve_int("FRACDAMP_MAX_STEPS", default)


def get_workers(default: int = DEFAULT_WORKERS) -> int:
    return _resolve_int("FRACDAMP_WORKERS", default)


def get_log_level(default: str = DEFAULT_LOG_LEVEL) -> str:
    raw = get_key("FRACDAMP_LOG_LEVEL")
    if raw is None:
        return default
    level = raw.strip().upper()
    if level not in logging.getLevelNamesMapping():
        logger.warning("ignoring FRACDAMP_LOG_LEVEL=%r", raw)
        return default
    return level
