"""
Logging configuration for MOCHA.

Applies a dictionary-based configuration when one is available and falls back
to ``logging.basicConfig`` otherwise.
"""

import copy
import logging
import logging.config
from pathlib import Path
from typing import Any

from ..settings import DATA_DIR

LOG_FILENAME = "mocha_causal.log"
LOG_FILE_PLACEHOLDER = "<<LOG_FILE_PATH>>"

logger = logging.getLogger(__name__)

DEFAULT_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
DEFAULT_LEVEL = logging.INFO


def _ensure_log_directory(log_path: Path) -> bool:
    """
    Ensure the log directory exists and is writable.

    Args:
        log_path: Path to the log file

    Returns:
        bool: True if directory exists and is writable, False otherwise
    """
    try:
        log_path.parent.mkdir(parents=True, exist_ok=True)
        test_file = log_path.parent / ".test_write"
        test_file.touch()
        test_file.unlink()
        return True
    except OSError as e:
        logger.error(f"Failed to create/verify log directory {log_path.parent}: {e}")
        return False


def _validate_handler_config(handler_config: dict[str, Any]) -> bool:
    """Check that a handler declares a class and a known level."""
    if not {"class", "level"} <= handler_config.keys():
        logger.error("Handler config missing required fields: {'class', 'level'}")
        return False
    level = handler_config["level"]
    if isinstance(level, str) and not isinstance(
        logging.getLevelName(level.upper()), int
    ):
        logger.error(f"Invalid logging level in handler config: {level}")
        return False
    return True


def _update_log_path(log_config: dict[str, Any], actual_log_path: Path) -> None:
    """
    Replace the log-file placeholder in every file handler.

    Handlers whose directory cannot be created are dropped so that the rest of
    the configuration still applies.
    """
    handlers = log_config.get("handlers")
    if not isinstance(handlers, dict):
        logger.debug("No handlers section in logging config")
        return

    for handler_name in list(handlers):
        handler_config = handlers[handler_name]
        if not isinstance(handler_config, dict):
            logger.warning(f"Invalid handler config for {handler_name}: expected dict")
            continue
        if handler_config.get("filename") != LOG_FILE_PLACEHOLDER:
            continue
        if not _validate_handler_config(handler_config) or not _ensure_log_directory(
            actual_log_path
        ):
            logger.warning(f"Skipping file handler '{handler_name}'")
            del handlers[handler_name]
            _drop_handler_references(log_config, handler_name)
            continue
        handler_config["filename"] = str(actual_log_path)
        logger.debug(f"Updated log handler '{handler_name}' path: {actual_log_path}")


def _drop_handler_references(log_config: dict[str, Any], handler_name: str) -> None:
    sections = [log_config.get("root", {})]
    sections.extend((log_config.get("loggers") or {}).values())
    for section in sections:
        if isinstance(section, dict) and handler_name in section.get("handlers", []):
            section["handlers"] = [h for h in section["handlers"] if h != handler_name]


def setup_logging(
    logging_config: dict[str, Any] | None = None, log_path: Path | None = None
) -> None:
    """
    Configure global logging settings.

    Args:
        logging_config: Optional dictConfig mapping
        log_path: File substituted for the log-file placeholder
    """
    logging.basicConfig(level=DEFAULT_LEVEL, format=DEFAULT_FORMAT, force=True)

    if not logging_config:
        logger.debug("No logging configuration provided, using basic config")
        return

    if not isinstance(logging_config, dict):
        logger.error(f"Invalid logging_config type: {type(logging_config)}")
        return

    config = copy.deepcopy(logging_config)
    actual_log_path = log_path or DATA_DIR / LOG_FILENAME

    try:
        _update_log_path(config, actual_log_path)
        logging.config.dictConfig(config)
        if not logging.getLogger().handlers:
            raise ValueError("No handlers configured for root logger")
        logger.debug(f"Logging configured. Log file: {actual_log_path}")
    except (ValueError, TypeError, AttributeError, ImportError) as e:
        logging.basicConfig(level=DEFAULT_LEVEL, format=DEFAULT_FORMAT, force=True)
        logger.error(f"Invalid logging configuration format: {e}")
    except OSError as e:
        logging.basicConfig(level=DEFAULT_LEVEL, format=DEFAULT_FORMAT, force=True)
        logger.error(f"Failed to configure logging due to OS error: {e}")
