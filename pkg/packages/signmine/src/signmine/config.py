"""
Centralized configuration and logging setup for signmine.
"""

import json
import logging
import os
from functools import lru_cache
from pathlib import Path
from typing import Any, Literal, Mapping, Optional

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .exceptions import ConfigError

PROJECT_ROOT = Path(__file__).resolve().parents[4]
DOTENV_PATH = PROJECT_ROOT / ".env"

_env_loaded = False


def load_env() -> None:
    """Load environment variables from .env file (only once)."""
    global _env_loaded
    if _env_loaded:
        return

    if DOTENV_PATH.exists():
        load_dotenv(dotenv_path=DOTENV_PATH, override=True)
    _env_loaded = True


load_env()


def get_log_level() -> int:
    """Log level from SIGNMINE_LOG_LEVEL, INFO when unset or unknown."""
    name = os.getenv("SIGNMINE_LOG_LEVEL", "INFO").upper()
    level = logging.getLevelName(name)
    return level if isinstance(level, int) else logging.INFO


def get_logger(name: str) -> logging.Logger:
    """Get a configured logger instance."""
    logger = logging.getLogger(name)
    if not logger.handlers:
        handler = logging.StreamHandler()
        formatter = logging.Formatter(
            '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
        )
        handler.setFormatter(formatter)
        logger.addHandler(handler)
        logger.setLevel(get_log_level())
    return logger


def set_log_level(level: str | int) -> None:
    """Apply a log level to every signmine logger created so far."""
    if isinstance(level, str):
        level = logging.getLevelName(level.upper())
        if not isinstance(level, int):
            raise ValueError(f"Unknown log level: {level}")
    os.environ["SIGNMINE_LOG_LEVEL"] = logging.getLevelName(level)
    for name, logger in logging.Logger.manager.loggerDict.items():
        if name.startswith("signmine") and isinstance(logger, logging.Logger):
            logger.setLevel(level)


@lru_cache()
def get_default_workers() -> int:
    """Thread-pool size from SIGNMINE_WORKERS (defaults to 1)."""
    raw = os.getenv("SIGNMINE_WORKERS", "1")
    try:
        workers = int(raw)
    except ValueError:
        raise ValueError(f"SIGNMINE_WORKERS must be an integer, got {raw!r}")
    return max(1, workers)


class PipelineConfig(BaseModel):
    """Every tunable of the pipeline. Unknown keys are rejected."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    fps: float = Field(25.0, gt=0, description="Frames per second of the source video")
    min_phoneme_len: int = Field(3, ge=1, description="Shortest phoneme kept, in frames")
    smoothing: bool = Field(True, description="Centered 3-tap moving average on hand speed")
    speed_tolerance: float = Field(0.0, ge=0, description="|f'| at or below this counts as sign 0")
    threshold: float = Field(0.5, ge=0.0, le=1.0, description="Phoneme similarity threshold T")
    deletion_cost: float = Field(1.0, gt=0, description="Insertion/deletion cost of the edit distance")
    method: Literal["grouping", "dbscan"] = "grouping"
    eps: float = Field(0.5, gt=0, description="DBSCAN neighbourhood radius")
    min_samples: int = Field(3, ge=1, le=5, description="DBSCAN core-point neighbourhood size")
    max_span_len: int = Field(16, ge=1, description="Longest span of consecutive phonemes compared")
    min_span_len: int = Field(1, ge=1, description="Shortest span reported by the matcher")
    normalization_policy: Literal["per_frame", "first_frame"] = "per_frame"
    target_shoulder_distance: float = Field(1.0, gt=0)
    workers: int = Field(default_factory=get_default_workers, ge=1)
    input: Optional[str] = None
    output_dir: Optional[str] = None


def read_config_file(path: str | os.PathLike) -> dict[str, Any]:
    """Reads a flat JSON config file and validates it on its own."""
    try:
        with open(path, "r", encoding="utf-8") as f:
            values = json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigError(f"Invalid JSON: {e.msg}", source=str(path), line=e.lineno) from e
    except OSError as e:
        raise ConfigError(f"Cannot read config file: {e.strerror}", source=str(path)) from e

    if not isinstance(values, dict):
        raise ConfigError("Config file must hold a JSON object", source=str(path))

    try:
        PipelineConfig(**values)
    except ValidationError as e:
        raise ConfigError(describe_validation_error(e), source=str(path)) from e
    return values


def load_pipeline_config(
    path: Optional[str | os.PathLike] = None,
    overrides: Optional[Mapping[str, Any]] = None,
) -> PipelineConfig:
    """
    Builds the effective configuration: flags > config file > defaults.

    Args:
        path: Optional flat JSON config file.
        overrides: Values given on the command line; None entries are ignored.

    Returns:
        The validated PipelineConfig.

    Raises:
        ConfigError: The config file is unreadable or invalid.
        ValidationError: An override is out of range or unknown.
    """
    values: dict[str, Any] = read_config_file(path) if path else {}
    if overrides:
        values.update({k: v for k, v in overrides.items() if v is not None})
    return PipelineConfig(**values)


def describe_validation_error(error: ValidationError) -> str:
    parts = []
    for item in error.errors():
        location = ".".join(str(p) for p in item["loc"]) or "<root>"
        parts.append(f"{location}: {item['msg']}")
    return "; ".join(parts)
