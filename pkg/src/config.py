"""Configuration management: process settings and scenario config files."""

import json
from pathlib import Path
from typing import Any, Union

import yaml
from pydantic import ValidationError
from pydantic_settings import BaseSettings, SettingsConfigDict

from src.schemas.network import NetworkConfig
from src.utils.exceptions import ConfigParseError, ConfigValidationError


class Settings(BaseSettings):
    """Process-level settings with environment-based configuration."""

    model_config = SettingsConfigDict(
        env_prefix="DUDE_SIM_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # Application settings
    APP_NAME: str = "dude-sim"
    VERSION: str = "1.0.0"

    # Execution
    DEFAULT_WORKERS: int = 1

    # Output
    FLOAT_SIGNIFICANT_DIGITS: int = 17

    # Logging
    LOG_LEVEL: str = "INFO"
    LOG_FORMAT: str = "console"


# Create global settings instance
settings = Settings()

YAML_SUFFIXES = {".yaml", ".yml"}


def _parse_text(text: str, path: Path) -> dict[str, Any]:
    if not text.strip():
        return {}
    try:
        if path.suffix.lower() in YAML_SUFFIXES:
            data = yaml.safe_load(text)
        else:
            data = json.loads(text)
    except (json.JSONDecodeError, yaml.YAMLError) as e:
        raise ConfigParseError(f"Cannot parse config file {path}: {e}", path=str(path)) from e

    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigParseError(
            f"Config file {path} must contain an object at the top level", path=str(path)
        )
    return data


def validate_config(data: dict[str, Any]) -> NetworkConfig:
    """
    Validate a raw mapping into a NetworkConfig.

    Raises:
        ConfigValidationError: naming the first offending field
    """
    try:
        return NetworkConfig.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        field = ".".join(str(part) for part in first["loc"]) or None
        raise ConfigValidationError(
            f"Invalid value for '{field}': {first['msg']}", field=field
        ) from e


def load_config(config_path: Union[str, Path]) -> NetworkConfig:
    """
    Load a scenario configuration from a JSON or YAML file.

    Missing keys take their documented defaults; unknown keys are rejected.

    Args:
        config_path: Path to a .json, .yaml or .yml file

    Returns:
        Validated NetworkConfig

    Raises:
        ConfigParseError: If the file is missing or unparsable
        ConfigValidationError: If a value is out of range or a key is unknown
    """
    path = Path(config_path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigParseError(f"Cannot read config file {path}: {e}", path=str(path)) from e

    return validate_config(_parse_text(text, path))


def save_config(config: NetworkConfig, config_path: Union[str, Path]) -> None:
    """Write every config field to a JSON or YAML file."""
    path = Path(config_path)
    data = config.model_dump(mode="json")
    if path.suffix.lower() in YAML_SUFFIXES:
        text = yaml.safe_dump(data, sort_keys=True)
    else:
        text = json.dumps(data, indent=2, sort_keys=True) + "\n"
    path.write_text(text, encoding="utf-8")


def apply_overrides(config: NetworkConfig, **overrides: Any) -> NetworkConfig:
    """Return a re-validated copy of config with non-None overrides applied."""
    updates = {key: value for key, value in overrides.items() if value is not None}
    if not updates:
        return config
    return validate_config({**config.model_dump(), **updates})
