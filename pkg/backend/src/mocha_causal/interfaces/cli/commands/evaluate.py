"""Eval command: checkpoint and corpus in, predictive metrics out."""

from pathlib import Path
from typing import Annotated

import typer

from ....config import settings
from ....core.model import MochaModel
from ....services.evaluation_service import metrics
from ....utils.io.checkpoint_io import load_checkpoint
from ....utils.io.corpus_io import read_corpus
from ....utils.io.records import write_records, write_summary
from ..cli import cli_app, display_mapping, state_of
from ._options import CheckpointOpt, CorpusOpt, WorkersOpt, max_workers


@cli_app.command("eval")
def eval_command(
    ctx: typer.Context,
    checkpoint: CheckpointOpt,
    corpus_path: CorpusOpt,
    out: Annotated[
        Path | None, typer.Option("--out", help="Summary document (JSON)")
    ] = None,
    records: Annotated[
        Path | None, typer.Option("--records", help="Per-sequence records (JSONL)")
    ] = None,
    horizon_cap: Annotated[
        float | None,
        typer.Option("--horizon-cap", help="Prediction window (default: 20x mean gap)"),
    ] = None,
    grid_points: Annotated[
        int | None, typer.Option("--grid-points", help="Prediction quadrature points")
    ] = None,
    workers: WorkersOpt = None,
) -> None:
    """
    Score a model on a corpus

    Reports NLL (per sequence and per event), next-event time RMSE and type
    accuracy.
    """
    config = state_of(ctx).config
    loaded = load_checkpoint(checkpoint)
    hp = loaded.hp
    corpus = read_corpus(corpus_path, hp.num_types, time_scale=hp.time_scale)
    points = grid_points or int(
        config.get("evaluation.grid_points", settings.PREDICTION_GRID_POINTS)
    )
    report = metrics(
        corpus,
        MochaModel(loaded.params, hp),
        horizon_cap=horizon_cap * hp.time_scale if horizon_cap else None,
        grid_points=points,
        max_workers=max_workers(config, workers),
    )
    summary = report.to_dict()
    per_sequence = summary.pop("sequences")
    if out:
        write_summary(out, summary)
    if records:
        write_records(records, per_sequence)
    display_mapping(summary, title="Evaluation")
