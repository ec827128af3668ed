import logging
import os
from pathlib import Path
from typing import Optional

from dotenv import dotenv_values
from pydantic import BaseModel, Field, ValidationError

from app.errors import InvalidInputError

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

# env var / config-file key for every settings field
ENV_KEYS = {
    "max_elements": "HPOLY_MAX_ELEMENTS",
    "max_bruhat_group": "HPOLY_MAX_BRUHAT_GROUP",
    "max_permutation_n": "HPOLY_MAX_PERMUTATION_N",
    "max_permutahedron_n": "HPOLY_MAX_PERMUTAHEDRON_N",
    "oracle_max_n": "HPOLY_ORACLE_MAX_N",
    "oracle_max_q": "HPOLY_ORACLE_MAX_Q",
    "log_level": "HPOLY_LOG_LEVEL",
}


class Settings(BaseModel):
    """Enumeration caps and logging level."""

    max_elements: int = Field(default=10_000_000, ge=1)
    max_bruhat_group: int = Field(default=2_000, ge=1)
    max_permutation_n: int = Field(default=12, ge=1)
    max_permutahedron_n: int = Field(default=10, ge=1)
    oracle_max_n: int = Field(default=3, ge=1)
    oracle_max_q: int = Field(default=3, ge=2)
    log_level: str = Field(default="WARNING")


def load_settings(config_file: Optional[Path] = None) -> Settings:
    """Defaults, then the key=value config file, then the process environment."""
    values: dict[str, str] = {}
    if config_file is not None:
        if not config_file.is_file():
            raise InvalidInputError(f"Config file {config_file} does not exist.")
        file_values = dotenv_values(config_file)
        for field, key in ENV_KEYS.items():
            raw = file_values.get(key)
            if raw is not None:
                values[field] = raw
        logger.info(f"Loaded {len(values)} setting(s) from {config_file}")

    for field, key in ENV_KEYS.items():
        raw = os.environ.get(key)
        if raw is not None:
            values[field] = raw

    try:
        return Settings.model_validate(values)
    except ValidationError as e:
        logger.error(f"Invalid settings: {e}")
        raise InvalidInputError(f"Invalid settings: {e}") from e


_current: Optional[Settings] = None


def get_settings() -> Settings:
    global _current
    if _current is None:
        _current = load_settings()
    return _current


def use_settings(settings: Optional[Settings]) -> None:
    """Install settings process-wide; None re-reads the environment on next access."""
    global _current
    _current = settings


def configure_logging(level: Optional[str] = None) -> None:
    logging.basicConfig(level=(level or get_settings().log_level).upper(), format=LOG_FORMAT)
