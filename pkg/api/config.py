"""
Centralized configuration and logging setup for the API.
"""

import os
from functools import lru_cache

from signmine.config import get_logger, load_env

load_env()

__all__ = ["get_logger", "get_cors_origins", "get_max_upload_bytes"]

DEFAULT_MAX_UPLOAD_MB = 50


@lru_cache()
def get_cors_origins() -> list:
    """Get CORS allowed origins."""
    cors_origins = os.getenv("CORS_ORIGINS", "")
    if cors_origins:
        return [origin.strip() for origin in cors_origins.split(",") if origin.strip()]

    frontend_url = os.getenv("FRONTEND_URL", "http://localhost:3000")
    origins = [frontend_url, "http://localhost:3000"]

    return sorted(filter(None, set(origins)))


@lru_cache()
def get_max_upload_bytes() -> int:
    """Upload size limit from SIGNMINE_MAX_UPLOAD_MB."""
    raw = os.getenv("SIGNMINE_MAX_UPLOAD_MB", str(DEFAULT_MAX_UPLOAD_MB))
    try:
        megabytes = float(raw)
    except ValueError:
        raise ValueError(f"SIGNMINE_MAX_UPLOAD_MB must be a number, got {raw!r}")
    if megabytes <= 0:
        raise ValueError("SIGNMINE_MAX_UPLOAD_MB must be positive")
    return int(megabytes * 1024 * 1024)
