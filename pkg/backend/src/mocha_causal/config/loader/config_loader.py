"""Handles loading of project configuration settings."""

import logging
from pathlib import Path
from typing import Any, Optional, TypeVar, overload

import yaml

from ...utils.errors import ConfigurationError
from ..settings import CONFIG_DIR

DEFAULT_CONFIG_FILE = "config.yaml"
USER_CONFIG_FILE = "user_config.yaml"

logger = logging.getLogger(__name__)

T = TypeVar("T")

_config_instance: Optional["MochaConfig"] = None


class MochaConfig:
    """
    Layered YAML configuration.

    Sources are merged in order: bundled defaults, user overrides, then an
    explicitly requested file. Later sources win key by key.
    """

    def __init__(
        self, explicit_path: Path | None = None, config_dir: Path | None = None
    ) -> None:
        self.settings: dict[str, Any] = {}
        self._config_dir = config_dir or CONFIG_DIR
        self._explicit_path = explicit_path
        self._loaded_sources: list[str] = []
        self._load_configuration()

    def _load_yaml_file(
        self, file_path: Path | None, required: bool = False
    ) -> dict[str, Any]:
        """Safely load a YAML file."""
        if not file_path or not file_path.exists():
            if required:
                raise ConfigurationError(f"Configuration file not found: {file_path}")
            logger.debug(f"Configuration file not found: {file_path}")
            return {}
        try:
            with file_path.open("r", encoding="utf-8") as f:
                data = yaml.safe_load(f)
        except yaml.YAMLError as e:
            if required:
                raise ConfigurationError(f"Error parsing YAML file {file_path}: {e}")
            logger.error(f"Error parsing YAML file {file_path}: {e}")
            return {}
        except OSError as e:
            if required:
                raise ConfigurationError(f"Error reading file {file_path}: {e}")
            logger.error(f"Error reading file {file_path}: {e}")
            return {}

        if data is None:
            data = {}
        if not isinstance(data, dict):
            if required:
                raise ConfigurationError(
                    f"Configuration file {file_path} is not a mapping."
                )
            logger.warning(
                f"Configuration file {file_path} is not a valid dictionary. Ignoring."
            )
            return {}
        logger.debug(f"Loaded configuration from {file_path}")
        self._loaded_sources.append(str(file_path))
        return data

    def _merge_configs(self, base: dict, updates: dict) -> dict:
        """Recursively merge update dict into base dict."""
        merged = base.copy()
        for key, value in updates.items():
            if isinstance(value, dict) and isinstance(merged.get(key), dict):
                merged[key] = self._merge_configs(merged[key], value)
            else:
                merged[key] = value
        return merged

    def _load_configuration(self) -> None:
        """Load bundled, user and explicit configurations and merge them."""
        current = self._load_yaml_file(self._config_dir / DEFAULT_CONFIG_FILE)
        current = self._merge_configs(
            current, self._load_yaml_file(self._config_dir / USER_CONFIG_FILE)
        )
        if self._explicit_path is not None:
            current = self._merge_configs(
                current, self._load_yaml_file(self._explicit_path, required=True)
            )
        self.settings = current

    @overload
    def get(self, key: str, default: T) -> T: ...

    @overload
    def get(self, key: str, default: None = None) -> object | None: ...

    def get(self, key: str, default: T | None = None) -> T | object | None:
        """Retrieve a configuration setting using dot notation for nested keys."""
        value: Any = self.settings
        for part in key.split("."):
            if not isinstance(value, dict) or part not in value:
                return default
            value = value[part]
        return default if value is None else value

    def section(self, key: str) -> dict[str, Any]:
        """Return a nested mapping, or an empty dict when absent."""
        value = self.get(key, {})
        return dict(value) if isinstance(value, dict) else {}

    def get_loaded_sources(self) -> list[str]:
        """Return a list of successfully loaded configuration sources."""
        return list(self._loaded_sources)


def get_mocha_config(path: Path | None = None) -> MochaConfig:
    """
    Get the MochaConfig instance.

    A new instance is built whenever an explicit file is requested; otherwise
    the cached default instance is returned.

    Returns:
        MochaConfig: The configuration instance
    """
    global _config_instance
    if path is not None:
        return MochaConfig(explicit_path=path)
    if _config_instance is None:
        _config_instance = MochaConfig()
        logger.debug("Created new MochaConfig instance")
    return _config_instance


__all__ = ["MochaConfig", "get_mocha_config"]
