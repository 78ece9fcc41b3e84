"""Train command: corpus in, checkpoint and training log out."""

from pathlib import Path
from typing import Annotated

import typer

from ....core.parameters import init_parameters
from ....services.training_service import fit
from ....utils.io.checkpoint_io import save_checkpoint
from ....utils.io.corpus_io import infer_num_types, read_corpus
from ....utils.io.records import write_records
from ..cli import cli_app, console, display_mapping, state_of
from ._options import (
    AttnDimOpt,
    BatchSizeOpt,
    BetaOpt,
    CorpusOpt,
    EpochsOpt,
    EpsilonOpt,
    FreezeOpt,
    GammaAcyclicOpt,
    GammaSparseOpt,
    HalfDimOpt,
    HiddenDimOpt,
    LearningRateOpt,
    MaxHistoryOpt,
    MaxOrderOpt,
    NumTypesOpt,
    OptimizerOpt,
    PatienceOpt,
    SeedOpt,
    SubstepsOpt,
    ThetaOpt,
    TimeScaleOpt,
    VariantOpt,
    build_hyperparameters,
    build_train_config,
)


@cli_app.command("train")
def train_command(
    ctx: typer.Context,
    corpus_path: CorpusOpt,
    out: Annotated[Path, typer.Option("--out", help="Checkpoint file to write")],
    log_path: Annotated[
        Path | None,
        typer.Option("--log", help="Training log (JSONL); default: <out>.log.jsonl"),
    ] = None,
    seed: SeedOpt = 0,
    num_types: NumTypesOpt = None,
    half_dim: HalfDimOpt = None,
    attn_dim: AttnDimOpt = None,
    hidden_dim: HiddenDimOpt = None,
    max_order: MaxOrderOpt = None,
    beta: BetaOpt = None,
    theta: ThetaOpt = None,
    gamma_acyclic: GammaAcyclicOpt = None,
    gamma_sparse: GammaSparseOpt = None,
    substeps: SubstepsOpt = None,
    epsilon: EpsilonOpt = None,
    variant: VariantOpt = None,
    max_history: MaxHistoryOpt = None,
    time_scale: TimeScaleOpt = None,
    freeze_weights: FreezeOpt = None,
    learning_rate: LearningRateOpt = None,
    epochs: EpochsOpt = None,
    batch_size: BatchSizeOpt = None,
    optimizer: OptimizerOpt = None,
    patience: PatienceOpt = None,
) -> None:
    """
    Fit a model to a corpus

    Writes the best parameters (lowest held-out loss) to a checkpoint and
    one JSON record per epoch and split to the training log.
    """
    config = state_of(ctx).config
    scale = time_scale if time_scale is not None else float(config.get("model.time_scale", 1.0))
    corpus = read_corpus(corpus_path, num_types, time_scale=scale)
    hp = build_hyperparameters(
        config,
        num_types or infer_num_types(corpus),
        {
            "half_dim": half_dim,
            "attn_dim": attn_dim,
            "hidden_dim": hidden_dim,
            "max_order": max_order,
            "beta": beta,
            "theta": theta,
            "gamma_acyclic": gamma_acyclic,
            "gamma_sparse": gamma_sparse,
            "integration_substeps": substeps,
            "epsilon": epsilon,
            "variant": variant,
            "max_history": max_history,
            "time_scale": scale,
            "freeze_weights_between_events": freeze_weights,
        },
    )
    cfg = build_train_config(
        config,
        {
            "seed": seed,
            "learning_rate": learning_rate,
            "max_epochs": epochs,
            "batch_size": batch_size,
            "optimizer": optimizer,
            "early_stop_patience": patience,
        },
    )

    console.print(
        f"[bold cyan]Training[/bold cyan] {hp.variant.value} on {len(corpus)} sequences (K={hp.num_types})"
    )
    params, log = fit(corpus, init_parameters(hp, seed), hp, cfg)
    save_checkpoint(
        out, params, hp, metadata={"seed": seed, "best_epoch": log.best_epoch, "train": cfg.to_dict()}
    )
    write_records(log_path or out.with_name(out.name + ".log.jsonl"), (r.to_dict() for r in log.records))

    final = log.final
    display_mapping(
        {
            "best epoch": log.best_epoch,
            "stopped early": log.stopped_early,
            "nll": final.nll,
            "acyclic": final.acyclic,
            "sparse": final.sparse,
            "total": final.total,
        },
        title="Training result",
    )
    console.print(f"[green]Checkpoint written to[/green] {out}")
