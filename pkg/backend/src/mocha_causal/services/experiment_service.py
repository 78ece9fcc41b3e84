"""Variant-ladder ablation: the same corpus fitted by every model variant."""

import dataclasses
import logging
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from ..core.events import EventSequence
from ..core.hyperparameters import HyperParameters, ModelVariant
from ..core.likelihood import evaluate_loss
from ..core.parameters import init_parameters
from .training_service import TrainConfig, fit

logger = logging.getLogger(__name__)

LADDER: tuple[ModelVariant, ...] = (
    ModelVariant.HAWKES_UNI,
    ModelVariant.HAWKES_MULTI,
    ModelVariant.MULTI_ORDER_STATIC,
    ModelVariant.FULL_DYNAMIC,
)


@dataclass
class LadderResult:
    """Held-out NLL of every variant for every seed."""

    seeds: list[int]
    heldout_nll: dict[ModelVariant, list[float]] = field(default_factory=dict)

    def mean(self, variant: ModelVariant) -> float:
        return float(np.mean(self.heldout_nll[variant]))

    def means(self) -> dict[str, float]:
        return {variant.value: self.mean(variant) for variant in self.heldout_nll}

    def is_monotone(self) -> bool:
        """True when each richer variant has a mean held-out NLL no larger than the previous."""
        values = [self.mean(v) for v in LADDER if v in self.heldout_nll]
        return all(b <= a for a, b in zip(values, values[1:]))

    def to_dict(self) -> dict:
        return {
            "seeds": self.seeds,
            "heldout_nll": {v.value: list(nlls) for v, nlls in self.heldout_nll.items()},
            "mean_heldout_nll": self.means(),
            "monotone": self.is_monotone(),
        }


def run_variant_ladder(
    train: Sequence[EventSequence],
    test: Sequence[EventSequence],
    hp: HyperParameters,
    cfg: TrainConfig,
    seeds: Sequence[int],
    variants: Sequence[ModelVariant] = LADDER,
) -> LadderResult:
    """Fit every variant from every seed on ``train`` and score it on ``test``."""
    result = LadderResult(seeds=list(seeds))
    for variant in variants:
        variant_hp = hp.replace(variant=variant)
        scores = []
        for seed in seeds:
            params = init_parameters(variant_hp, seed)
            fitted, _ = fit(train, params, variant_hp, dataclasses.replace(cfg, seed=seed))
            scores.append(evaluate_loss(test, fitted, variant_hp).nll)
        result.heldout_nll[variant] = scores
        logger.info(f"{variant.value}: mean held-out NLL {np.mean(scores):.4f}")
    return result
