"""Gen-synthetic command: corpora from planted generators with known structure."""

from pathlib import Path
from typing import Annotated

import typer

from ....services.evaluation_service import GroundTruthPath, write_paths
from ....services.simulation_service import (
    chain_planted_generator,
    default_planted_generator,
    read_generator,
    simulate_corpus,
    write_generator,
)
from ....utils.io.corpus_io import write_corpus
from ....utils.io.records import write_records
from ..cli import cli_app, console, state_of
from ._options import SeedOpt, WorkersOpt, max_workers


@cli_app.command("gen-synthetic")
def gen_synthetic_command(
    ctx: typer.Context,
    out: Annotated[Path, typer.Option("--out", help="Corpus file to write")],
    generator_path: Annotated[
        Path | None,
        typer.Option("--generator", help="Generator description (YAML)", exists=True),
    ] = None,
    chain: Annotated[
        int | None, typer.Option("--chain", help="Use a planted chain over this many types")
    ] = None,
    num_sequences: Annotated[int, typer.Option("--n", help="Number of sequences")] = 200,
    horizon: Annotated[float, typer.Option("--horizon", help="Observation window T")] = 50.0,
    seed: SeedOpt = 0,
    edges_out: Annotated[
        Path | None, typer.Option("--edges-out", help="Planted edges (JSONL)")
    ] = None,
    paths_out: Annotated[
        Path | None, typer.Option("--paths-out", help="Planted paths (JSONL)")
    ] = None,
    generator_out: Annotated[
        Path | None, typer.Option("--generator-out", help="Generator description used (YAML)")
    ] = None,
    workers: WorkersOpt = None,
) -> None:
    """
    Generate a synthetic corpus with a planted causal DAG

    Without --generator or --chain the built-in five-type generator is used.
    """
    if generator_path is not None and chain is not None:
        raise typer.BadParameter("give at most one of --generator and --chain")
    config = state_of(ctx).config
    if generator_path is not None:
        generator = read_generator(generator_path)
    elif chain is not None:
        generator = chain_planted_generator(chain)
    else:
        generator = default_planted_generator()

    corpus = simulate_corpus(
        generator, num_sequences, horizon, seed, max_workers=max_workers(config, workers)
    )
    write_corpus(out, corpus)
    if edges_out is not None:
        write_records(
            edges_out,
            ({"u": u, "v": v, "weight": w} for (u, v), w in sorted(generator.edges.items())),
        )
    if paths_out is not None:
        write_paths(
            paths_out,
            [GroundTruthPath(p, "->".join(map(str, p))) for p in generator.paths],
        )
    if generator_out is not None:
        write_generator(generator_out, generator)
    console.print(
        f"[green]Wrote {len(corpus)} sequences ({sum(len(s) for s in corpus)} events) to[/green] {out}"
    )
