"""Logging setup."""

from .logging_config import LOG_FILE_PLACEHOLDER, LOG_FILENAME, setup_logging

__all__ = ["LOG_FILENAME", "LOG_FILE_PLACEHOLDER", "setup_logging"]
