"""
Configuration management for MOCHA.

Exposes the layered YAML configuration (``get_mocha_config``), the logging
setup and the default constants from ``settings``.
"""

from .loader.config_loader import MochaConfig, get_mocha_config
from .logging.logging_config import setup_logging
from .settings import (
    CONFIG_DIR,
    DATA_DIR,
    PROJECT_ROOT,
    determine_project_root,
    get_config_dir,
    get_data_dir,
    is_frozen,
)
from .settings import get_settings as get_static_settings

__all__ = [
    "CONFIG_DIR",
    "DATA_DIR",
    "PROJECT_ROOT",
    "MochaConfig",
    "determine_project_root",
    "get_config_dir",
    "get_data_dir",
    "get_mocha_config",
    "get_static_settings",
    "is_frozen",
    "setup_logging",
]
