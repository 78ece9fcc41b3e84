#!/usr/bin/env python
"""
Main CLI application for MOCHA.

Commands train models, evaluate them, simulate corpora, export causal graphs,
match declared causal paths, verify gradients and generate synthetic data.
Exit status: 0 success, 1 usage error, 2 data error, 3 numerical failure.
"""

import logging
import sys
from dataclasses import dataclass
from importlib.metadata import PackageNotFoundError, version as package_version
from pathlib import Path
from typing import Annotated

import click
import typer
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from ...config import MochaConfig, get_mocha_config, setup_logging
from ...utils.errors import EXIT_OK, EXIT_USAGE, MochaError

console = Console()
err_console = Console(stderr=True)
logger = logging.getLogger(__name__)

cli_app = typer.Typer(
    name="mocha",
    help="MOCHA - multi-order dynamic causal point processes",
    rich_markup_mode="rich",
    no_args_is_help=True,
    add_completion=False,
)


@dataclass
class CliState:
    """Objects shared by every command through ``ctx.obj``."""

    config: MochaConfig
    verbose: bool = False


def _version() -> str:
    try:
        return package_version("mocha_causal")
    except PackageNotFoundError:
        return "unknown"


def version_callback(value: bool) -> None:
    """Show version information."""
    if value:
        console.print(f"[bold cyan]MOCHA[/bold cyan] v{_version()}")
        raise typer.Exit()


def configure_logging(config: MochaConfig, verbose: bool) -> None:
    """Apply the configured dictConfig, then log to stderr through Rich."""
    setup_logging(config.section("logging") or None)
    root = logging.getLogger()
    for handler in list(root.handlers):
        if type(handler) is logging.StreamHandler:
            root.removeHandler(handler)
    level = logging.DEBUG if verbose else logging.INFO
    rich_handler = RichHandler(console=err_console, rich_tracebacks=True, show_path=False)
    rich_handler.setLevel(level)
    root.addHandler(rich_handler)
    root.setLevel(logging.DEBUG)
    if verbose:
        logger.debug("Verbose logging enabled")


@cli_app.callback()
def app_callback(
    ctx: typer.Context,
    version: Annotated[
        bool | None,
        typer.Option(
            "--version", callback=version_callback, is_eager=True, help="Show version and exit"
        ),
    ] = None,
    verbose: Annotated[
        bool, typer.Option("--verbose", "-v", help="Enable verbose output")
    ] = False,
    config_file: Annotated[
        Path | None,
        typer.Option(
            "--config",
            "-c",
            help="Path to a YAML configuration file",
            file_okay=True,
            dir_okay=False,
        ),
    ] = None,
) -> None:
    """
    MOCHA - multi-order dynamic causal point processes

    [bold]Common workflows:[/bold]

    • [cyan]mocha gen-synthetic --out data/corpus.jsonl[/cyan] - Generate planted data
    • [cyan]mocha train --corpus data/corpus.jsonl --out model.ckpt[/cyan] - Fit a model
    • [cyan]mocha eval --checkpoint model.ckpt --corpus data/test.jsonl[/cyan] - Score it
    • [cyan]mocha graphs --checkpoint model.ckpt --corpus data/test.jsonl --time 5[/cyan] - Export graphs
    """
    config = get_mocha_config(config_file)
    configure_logging(config, verbose)
    if config_file:
        logger.debug(f"Using config file: {config_file}")
    ctx.obj = CliState(config=config, verbose=verbose)


def state_of(ctx: typer.Context) -> CliState:
    if isinstance(ctx.obj, CliState):
        return ctx.obj
    state = CliState(config=get_mocha_config())
    ctx.obj = state
    return state


def display_mapping(data: dict, title: str) -> None:
    """Display a flat mapping as a two-column table."""
    table = Table(title=title, show_header=False, box=None)
    table.add_column("Metric", style="cyan")
    table.add_column("Value", style="green")
    for key, value in data.items():
        shown = f"{value:.6g}" if isinstance(value, float) else str(value)
        table.add_row(str(key), shown)
    console.print(table)


# Command modules register themselves on cli_app
from .commands import (  # noqa: E402
    ablation,
    evaluate,
    gen_synthetic,
    gradcheck,
    graphs,
    match_paths,
    simulate,
    train,
)

__all__ = [
    "ablation",
    "cli_app",
    "evaluate",
    "gen_synthetic",
    "gradcheck",
    "graphs",
    "main",
    "match_paths",
    "run",
    "simulate",
    "train",
]


def run(argv: list[str] | None = None) -> int:
    """Run the CLI and map every outcome to an exit status."""
    try:
        result = cli_app(args=argv, prog_name="mocha", standalone_mode=False)
    except click.exceptions.Exit as e:
        return e.exit_code
    except click.ClickException as e:
        e.show(file=sys.stderr)
        return EXIT_USAGE
    except click.exceptions.Abort:
        err_console.print("[red]Aborted.[/red]")
        return EXIT_USAGE
    except MochaError as e:
        logger.debug("Command failed", exc_info=True)
        err_console.print(f"[red]Error ({e.code}):[/red] {e}")
        return e.exit_code
    except ValueError as e:
        err_console.print(f"[red]Error:[/red] {e}")
        return EXIT_USAGE
    return result if isinstance(result, int) else EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
