"""Gradcheck command: analytic gradients against central differences."""

from typing import Annotated

import typer
from rich.table import Table

from ....config import settings
from ....core.likelihood import gradient_check
from ....core.parameters import init_parameters
from ....services.simulation_service import random_toy_corpus
from ..cli import cli_app, console, state_of
from ._options import (
    AttnDimOpt,
    BetaOpt,
    GammaAcyclicOpt,
    GammaSparseOpt,
    HalfDimOpt,
    HiddenDimOpt,
    SeedOpt,
    SubstepsOpt,
    VariantOpt,
    build_hyperparameters,
)


@cli_app.command("gradcheck")
def gradcheck_command(
    ctx: typer.Context,
    seed: SeedOpt = 0,
    num_types: Annotated[int, typer.Option("--K", help="Number of event types")] = 3,
    max_order: Annotated[int, typer.Option("--L", help="Maximum causal order")] = 2,
    num_sequences: Annotated[int, typer.Option("--sequences", help="Toy sequences")] = 2,
    max_events: Annotated[int, typer.Option("--max-events", help="Events per toy sequence")] = 6,
    step: Annotated[
        float, typer.Option("--step", help="Finite-difference step")
    ] = settings.GRADCHECK_STEP,
    tolerance: Annotated[
        float, typer.Option("--tolerance", help="Largest accepted relative error")
    ] = settings.GRADCHECK_TOLERANCE,
    max_entries: Annotated[
        int | None, typer.Option("--max-entries", help="Entries perturbed per tensor")
    ] = None,
    half_dim: HalfDimOpt = None,
    attn_dim: AttnDimOpt = None,
    hidden_dim: HiddenDimOpt = None,
    beta: BetaOpt = None,
    gamma_acyclic: GammaAcyclicOpt = None,
    gamma_sparse: GammaSparseOpt = None,
    substeps: SubstepsOpt = None,
    variant: VariantOpt = None,
) -> None:
    """
    Verify loss gradients on a small random corpus

    Exits with status 3 when any parameter tensor exceeds the tolerance.
    """
    config = state_of(ctx).config
    hp = build_hyperparameters(
        config,
        num_types,
        {
            "max_order": max_order,
            "half_dim": half_dim,
            "attn_dim": attn_dim,
            "hidden_dim": hidden_dim,
            "beta": beta,
            "gamma_acyclic": gamma_acyclic,
            "gamma_sparse": gamma_sparse,
            "integration_substeps": substeps,
            "variant": variant,
            "time_scale": 1.0,
        },
    )
    batch = random_toy_corpus(num_types, num_sequences, max_events, seed)
    report = gradient_check(
        batch, init_parameters(hp, seed), hp, step, tolerance, max_entries=max_entries, seed=seed
    )

    table = Table(title=f"Gradient check ({hp.variant.value}, K={num_types}, L={hp.order})")
    table.add_column("Tensor", style="cyan")
    table.add_column("Entries", justify="right")
    table.add_column("Relative error", justify="right")
    table.add_column("Status")
    for check in report.checks:
        status = "[green]ok[/green]" if check.passed else "[red]FAIL[/red]"
        table.add_row(check.name, str(check.entries_checked), f"{check.relative_error:.3e}", status)
    console.print(table)
    report.raise_for_failure()
    console.print(f"[green]All gradients within {tolerance:.1e}[/green]")
