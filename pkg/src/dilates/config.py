import os
import logging
from dataclasses import dataclass
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

TOOL_VERSION = "0.3.0"
DEFAULT_BUDGET = 10 ** 8
DEFAULT_WORKERS = 1
DEFAULT_LOG_LEVEL = "WARNING"


def _positive_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw.strip())
    except ValueError:
        raise ValueError(f"{name} must be a positive integer, got {raw!r}")
    if value < 1:
        raise ValueError(f"{name} must be a positive integer, got {raw!r}")
    return value


@dataclass
class Settings:
    """Runtime settings read from the environment (and an optional .env file)."""
    budget: int = DEFAULT_BUDGET
    workers: int = DEFAULT_WORKERS
    log_level: str = DEFAULT_LOG_LEVEL

    @classmethod
    def from_env(cls) -> "Settings":
        level = os.getenv("DILATE_LOG_LEVEL", DEFAULT_LOG_LEVEL).strip().upper()
        if not isinstance(logging.getLevelName(level), int):
            raise ValueError(f"DILATE_LOG_LEVEL must be a logging level name, got {level!r}")
        return cls(
            budget=_positive_int("DILATE_BUDGET", DEFAULT_BUDGET),
            workers=_positive_int("DILATE_WORKERS", DEFAULT_WORKERS),
            log_level=level,
        )
