"""Command-line interface."""

from .cli import cli_app, main, run

__all__ = ["cli_app", "main", "run"]
