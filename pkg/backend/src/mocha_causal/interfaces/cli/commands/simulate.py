"""Simulate command: checkpoint or generator description in, corpus out."""

from pathlib import Path
from typing import Annotated

import typer

from ....config import settings
from ....core.model import MochaModel
from ....services.simulation_service import read_generator, simulate_corpus
from ....utils.io.checkpoint_io import load_checkpoint
from ....utils.io.corpus_io import write_corpus
from ..cli import cli_app, console, state_of
from ._options import SeedOpt, WorkersOpt, max_workers


@cli_app.command("simulate")
def simulate_command(
    ctx: typer.Context,
    out: Annotated[Path, typer.Option("--out", help="Corpus file to write")],
    horizon: Annotated[float, typer.Option("--horizon", help="Observation window T")],
    checkpoint: Annotated[
        Path | None,
        typer.Option("--checkpoint", help="Simulate from a trained model", exists=True),
    ] = None,
    generator_path: Annotated[
        Path | None,
        typer.Option("--generator", help="Simulate from a generator file", exists=True),
    ] = None,
    num_sequences: Annotated[int, typer.Option("--n", help="Number of sequences")] = 100,
    seed: SeedOpt = 0,
    max_events: Annotated[
        int | None, typer.Option("--max-events", help="Event cap per sequence")
    ] = None,
    workers: WorkersOpt = None,
) -> None:
    """
    Simulate a corpus by thinning

    Exactly one of --checkpoint and --generator must be given.
    """
    if (checkpoint is None) == (generator_path is None):
        raise typer.BadParameter("give exactly one of --checkpoint and --generator")
    if horizon <= 0 or num_sequences < 1:
        raise typer.BadParameter("--horizon must be positive and --n at least 1")
    config = state_of(ctx).config
    cap = max_events or int(config.get("simulation.max_events", settings.MAX_SIMULATED_EVENTS))

    options: dict = {"max_events": cap}
    if checkpoint is not None:
        loaded = load_checkpoint(checkpoint)
        source = MochaModel(loaded.params, loaded.hp)
        scale = loaded.hp.time_scale
        options.update(
            {
                key: config.get(f"simulation.{key}")
                for key in ("safety_factor", "staleness_horizon", "probe_points")
                if config.get(f"simulation.{key}") is not None
            }
        )
    else:
        assert generator_path is not None
        source = read_generator(generator_path)
        scale = 1.0

    corpus = simulate_corpus(
        source,
        num_sequences,
        horizon * scale,
        seed,
        max_workers=max_workers(config, workers),
        **options,
    )
    write_corpus(out, corpus, time_scale=scale)
    console.print(
        f"[green]Wrote {len(corpus)} sequences ({sum(len(s) for s in corpus)} events) to[/green] {out}"
    )
