"""Ablation command: held-out NLL along the variant ladder."""

from pathlib import Path
from typing import Annotated

import typer
from rich.table import Table

from ....core.hyperparameters import ModelVariant
from ....services.experiment_service import LADDER, run_variant_ladder
from ....utils.io.corpus_io import infer_num_types, read_corpus
from ....utils.io.records import write_summary
from ..cli import cli_app, console, state_of
from ._options import (
    BatchSizeOpt,
    EpochsOpt,
    LearningRateOpt,
    MaxOrderOpt,
    NumTypesOpt,
    SubstepsOpt,
    TimeScaleOpt,
    build_hyperparameters,
    build_train_config,
)


@cli_app.command("ablation")
def ablation_command(
    ctx: typer.Context,
    train_path: Annotated[
        Path, typer.Option("--train", help="Training corpus", exists=True, dir_okay=False)
    ],
    test_path: Annotated[
        Path, typer.Option("--test", help="Test corpus", exists=True, dir_okay=False)
    ],
    seeds: Annotated[
        list[int] | None, typer.Option("--seed", help="Seed (repeatable)")
    ] = None,
    num_seeds: Annotated[
        int, typer.Option("--num-seeds", help="Seeds 0..n-1 when --seed is not given")
    ] = 3,
    variants: Annotated[
        list[str] | None, typer.Option("--variant", help="Restrict to these variants")
    ] = None,
    out: Annotated[Path | None, typer.Option("--out", help="Write results as JSON")] = None,
    num_types: NumTypesOpt = None,
    max_order: MaxOrderOpt = None,
    substeps: SubstepsOpt = None,
    time_scale: TimeScaleOpt = None,
    learning_rate: LearningRateOpt = None,
    epochs: EpochsOpt = None,
    batch_size: BatchSizeOpt = None,
) -> None:
    """
    Fit every model variant on one corpus and compare held-out NLL

    The variants run from single-order static excitation up to the full
    dynamic multi-order model.
    """
    config = state_of(ctx).config
    scale = time_scale if time_scale is not None else float(config.get("model.time_scale", 1.0))
    train = read_corpus(train_path, num_types, time_scale=scale)
    test = read_corpus(test_path, num_types, time_scale=scale)
    K = num_types or max(infer_num_types(train), infer_num_types(test))
    hp = build_hyperparameters(
        config,
        K,
        {"max_order": max_order, "integration_substeps": substeps, "time_scale": scale},
    )
    cfg = build_train_config(
        config,
        {"learning_rate": learning_rate, "max_epochs": epochs, "batch_size": batch_size},
    )
    ladder = tuple(ModelVariant.parse(v) for v in variants) if variants else LADDER
    result = run_variant_ladder(
        train, test, hp, cfg, seeds or list(range(num_seeds)), variants=ladder
    )

    table = Table(title="Variant ladder (held-out NLL per sequence)")
    table.add_column("Variant", style="cyan")
    table.add_column("Mean", style="green", justify="right")
    table.add_column("Per seed", justify="right")
    for variant, scores in result.heldout_nll.items():
        table.add_row(
            variant.value, f"{result.mean(variant):.4f}", ", ".join(f"{s:.4f}" for s in scores)
        )
    console.print(table)
    console.print(f"Monotone: {'[green]yes' if result.is_monotone() else '[yellow]no'}")
    if out is not None:
        write_summary(out, result.to_dict())
