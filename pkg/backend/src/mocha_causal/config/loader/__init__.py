"""YAML configuration loading."""

from .config_loader import MochaConfig, get_mocha_config

__all__ = ["MochaConfig", "get_mocha_config"]
