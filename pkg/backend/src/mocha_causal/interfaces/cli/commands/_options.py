"""Options shared by several commands and the helpers that resolve them."""

from pathlib import Path
from typing import Annotated, Any

import typer

from ....config import MochaConfig
from ....core.hyperparameters import HyperParameters
from ....services.training_service import TrainConfig

CorpusOpt = Annotated[
    Path,
    typer.Option("--corpus", help="Corpus file (JSONL, one sequence per line)", exists=True, dir_okay=False),
]
CheckpointOpt = Annotated[
    Path,
    typer.Option("--checkpoint", help="Model checkpoint file", exists=True, dir_okay=False),
]
SeedOpt = Annotated[int, typer.Option("--seed", help="Random seed")]
WorkersOpt = Annotated[
    int | None, typer.Option("--workers", help="Worker threads for per-sequence work")
]
ThetaOpt = Annotated[
    float | None, typer.Option("--theta", help="Edge threshold (default: model value)")
]

# Hyper-parameter overrides; None keeps the configured value
NumTypesOpt = Annotated[int | None, typer.Option("--K", help="Number of event types")]
HalfDimOpt = Annotated[int | None, typer.Option("--d", help="Embedding half-dimension")]
AttnDimOpt = Annotated[int | None, typer.Option("--d-attn", help="Attention dimension")]
HiddenDimOpt = Annotated[int | None, typer.Option("--hidden", help="Decay MLP hidden width")]
MaxOrderOpt = Annotated[int | None, typer.Option("--L", help="Maximum causal order")]
BetaOpt = Annotated[float | None, typer.Option("--beta", help="Edge activation sharpness")]
GammaAcyclicOpt = Annotated[
    float | None, typer.Option("--gamma-acyclic", help="Acyclicity penalty weight")
]
GammaSparseOpt = Annotated[
    float | None, typer.Option("--gamma-sparse", help="Sparsity penalty weight")
]
SubstepsOpt = Annotated[
    int | None, typer.Option("--M", help="Trapezoid sub-points per interval")
]
EpsilonOpt = Annotated[float | None, typer.Option("--epsilon", help="Intensity floor")]
VariantOpt = Annotated[
    str | None,
    typer.Option(
        "--variant",
        help="hawkes_uni, hawkes_multi, multi_order_static or full_dynamic",
    ),
]
MaxHistoryOpt = Annotated[
    int | None, typer.Option("--max-history", help="Most recent events per query")
]
TimeScaleOpt = Annotated[
    float | None, typer.Option("--time-scale", help="Factor applied to raw timestamps")
]
FreezeOpt = Annotated[
    bool | None,
    typer.Option(
        "--freeze-weights/--no-freeze-weights",
        help="Hold structural weights at the most recent event",
    ),
]

# Training overrides
LearningRateOpt = Annotated[float | None, typer.Option("--lr", help="Learning rate")]
EpochsOpt = Annotated[int | None, typer.Option("--epochs", help="Maximum epochs")]
BatchSizeOpt = Annotated[int | None, typer.Option("--batch-size", help="Sequences per batch")]
OptimizerOpt = Annotated[str | None, typer.Option("--optimizer", help="adam or sgd")]
PatienceOpt = Annotated[
    int | None, typer.Option("--patience", help="Early-stopping patience in epochs")
]


def merge_overrides(base: dict[str, Any], overrides: dict[str, Any]) -> dict[str, Any]:
    """Overlay the overrides that are not None."""
    merged = dict(base)
    merged.update({k: v for k, v in overrides.items() if v is not None})
    return merged


def build_hyperparameters(
    config: MochaConfig, num_types: int, overrides: dict[str, Any]
) -> HyperParameters:
    """Hyper-parameters from the ``model`` section, then flag overrides."""
    values = merge_overrides(config.section("model"), overrides)
    values["num_types"] = num_types
    return HyperParameters.from_dict(values)


def build_train_config(config: MochaConfig, overrides: dict[str, Any]) -> TrainConfig:
    """Training settings from the ``training`` section, then flag overrides."""
    return TrainConfig.from_dict(merge_overrides(config.section("training"), overrides))


def max_workers(config: MochaConfig, flag: int | None) -> int:
    if flag is not None:
        return flag
    return int(config.get("evaluation.max_workers", 1))
