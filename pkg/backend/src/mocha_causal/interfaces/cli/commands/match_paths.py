"""Match-paths command: how often declared causal paths appear in learned graphs."""

from pathlib import Path
from typing import Annotated

import typer
from rich.table import Table

from ....core.model import MochaModel
from ....services.evaluation_service import path_matching_rate, read_paths
from ....utils.io.checkpoint_io import load_checkpoint
from ....utils.io.corpus_io import read_corpus
from ....utils.io.records import write_summary
from ..cli import cli_app, console, state_of
from ._options import CheckpointOpt, CorpusOpt, ThetaOpt


@cli_app.command("match-paths")
def match_paths_command(
    ctx: typer.Context,
    checkpoint: CheckpointOpt,
    corpus_path: CorpusOpt,
    paths_file: Annotated[
        Path,
        typer.Option("--paths", help="Ground-truth paths (JSONL)", exists=True, dir_okay=False),
    ],
    terminal_type: Annotated[
        int, typer.Option("--terminal-type", help="Event type every path ends in")
    ],
    out: Annotated[
        Path | None, typer.Option("--out", help="Write the rates as JSON")
    ] = None,
    theta: ThetaOpt = None,
) -> None:
    """
    Path matching rate per declared path

    At every occurrence of the terminal type, the graph is extracted from
    the history strictly before it and checked for all edges of the path.
    """
    state_of(ctx)
    loaded = load_checkpoint(checkpoint)
    model = MochaModel(loaded.params, loaded.hp)
    corpus = read_corpus(corpus_path, loaded.hp.num_types, time_scale=loaded.hp.time_scale)
    matches = path_matching_rate(corpus, model, read_paths(paths_file), terminal_type, theta)

    table = Table(title=f"Path matching (terminal type {terminal_type})")
    table.add_column("Path", style="cyan")
    table.add_column("Matched", justify="right")
    table.add_column("Occurrences", justify="right")
    table.add_column("Rate", style="green", justify="right")
    for match in matches:
        label = match.label or "->".join(map(str, match.types))
        table.add_row(label, str(match.matched), str(match.occurrences), f"{match.rate:.4f}")
    console.print(table)

    if out is not None:
        write_summary(
            out,
            {
                "terminal_type": terminal_type,
                "theta": loaded.hp.theta if theta is None else theta,
                "paths": [m.to_dict() for m in matches],
            },
        )
