"""Graphs command: causal-graph snapshots at chosen times."""

from pathlib import Path
from typing import Annotated

import typer

from ....core.model import MochaModel
from ....utils.io.checkpoint_io import load_checkpoint
from ....utils.io.corpus_io import read_corpus
from ....utils.io.graph_export import GraphSnapshot, snapshot_to_dot, write_snapshots
from ..cli import cli_app, console, state_of
from ._options import CheckpointOpt, CorpusOpt, ThetaOpt


@cli_app.command("graphs")
def graphs_command(
    ctx: typer.Context,
    checkpoint: CheckpointOpt,
    corpus_path: CorpusOpt,
    times: Annotated[
        list[float], typer.Option("--time", help="Snapshot time (repeatable)")
    ],
    out: Annotated[Path, typer.Option("--out", help="Snapshot file (JSONL)")],
    dot_dir: Annotated[
        Path | None, typer.Option("--dot-dir", help="Also write one DOT file per snapshot")
    ] = None,
    theta: ThetaOpt = None,
) -> None:
    """
    Export thresholded causal graphs

    For every sequence and every requested time within its window, writes
    the structural weights, the adjacency and cycle diagnostics.
    """
    state_of(ctx)
    loaded = load_checkpoint(checkpoint)
    hp = loaded.hp
    model = MochaModel(loaded.params, hp)
    corpus = read_corpus(corpus_path, hp.num_types, time_scale=hp.time_scale)

    snapshots = []
    for seq in corpus:
        for raw_t in times:
            t = raw_t * hp.time_scale
            if t > seq.horizon:
                continue
            snapshot = GraphSnapshot.build(
                model.structural_weights(seq, t), hp, theta, seq_id=seq.seq_id
            )
            snapshots.append(snapshot)
            if dot_dir is not None:
                snapshot_to_dot(snapshot.graph, dot_dir / f"{seq.seq_id}_t{raw_t:g}.dot")
    write_snapshots(out, snapshots)
    cyclic = sum(not s.graph.is_dag for s in snapshots)
    console.print(f"[green]Wrote {len(snapshots)} snapshots[/green] ({cyclic} with cycles) to {out}")
