"""
Maximum-likelihood training.

``fit`` runs a first-order optimizer from ``torch.optim`` over mini-batches,
tracks the held-out objective, early-stops on it and keeps the best
parameters. Every epoch produces one ``EpochRecord`` per split.
"""

import logging
import math
import time
from collections.abc import Sequence
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Any

import numpy as np
import torch

from ..config import settings
from ..core.decay import kernel_profile
from ..core.events import EventSequence, corpus_mean_gap, validate_corpus
from ..core.hyperparameters import HyperParameters
from ..core.likelihood import LossBreakdown, evaluate_loss, loss_and_gradient
from ..core.parameters import ModelParameters, validate_parameters
from ..utils.errors import (
    DivergedError,
    EmptyCorpusError,
    HyperParameterError,
    NumericalError,
)

logger = logging.getLogger(__name__)


class OptimizerKind(Enum):
    ADAM = "adam"
    SGD = "sgd"


@dataclass(frozen=True)
class TrainConfig:
    """Optimizer and schedule settings."""

    learning_rate: float = settings.LEARNING_RATE
    max_epochs: int = settings.MAX_EPOCHS
    batch_size: int = settings.BATCH_SIZE
    seed: int = 0
    optimizer: OptimizerKind = OptimizerKind.ADAM
    adam_betas: tuple[float, float] = settings.ADAM_BETAS
    adam_eps: float = settings.ADAM_EPS
    early_stop_patience: int = settings.EARLY_STOP_PATIENCE
    validation_fraction: float = settings.VALIDATION_FRACTION
    divergence_patience: int = settings.DIVERGENCE_PATIENCE

    def __post_init__(self) -> None:
        if not isinstance(self.optimizer, OptimizerKind):
            try:
                object.__setattr__(
                    self, "optimizer", OptimizerKind(str(self.optimizer).lower())
                )
            except ValueError as e:
                raise HyperParameterError(f"Unknown optimizer '{self.optimizer}'") from e
        object.__setattr__(self, "adam_betas", tuple(self.adam_betas))
        if not (self.learning_rate > 0 and math.isfinite(self.learning_rate)):
            raise HyperParameterError(f"learning_rate must be positive, got {self.learning_rate}")
        if self.max_epochs < 1 or self.batch_size < 1:
            raise HyperParameterError("max_epochs and batch_size must be positive")
        if self.early_stop_patience < 1 or self.divergence_patience < 1:
            raise HyperParameterError("patience values must be positive")
        if not 0 <= self.validation_fraction < 1:
            raise HyperParameterError(
                f"validation_fraction must lie in [0, 1), got {self.validation_fraction}"
            )
        if not all(0 <= b < 1 for b in self.adam_betas) or self.adam_eps <= 0:
            raise HyperParameterError("adam_betas must lie in [0, 1) and adam_eps be positive")

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["optimizer"] = self.optimizer.value
        data["adam_betas"] = list(self.adam_betas)
        return data

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "TrainConfig":
        known = {name for name in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise HyperParameterError(f"Unknown training option(s): {sorted(unknown)}")
        return cls(**{k: v for k, v in data.items() if v is not None})


@dataclass(frozen=True)
class EpochRecord:
    """One line of the training log."""

    epoch: int
    split: str
    nll: float
    acyclic: float
    sparse: float
    total: float
    wall_time: float

    @classmethod
    def from_loss(
        cls, epoch: int, split: str, loss: LossBreakdown, wall_time: float
    ) -> "EpochRecord":
        return cls(epoch, split, loss.nll, loss.acyclic, loss.sparse, loss.total, wall_time)

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


@dataclass
class TrainingLog:
    """Records of a training run plus its outcome."""

    records: list[EpochRecord] = field(default_factory=list)
    best_epoch: int = 0
    stopped_early: bool = False

    def append(self, record: EpochRecord) -> None:
        self.records.append(record)
        logger.info(
            f"epoch {record.epoch:4d} {record.split:>8}: total={record.total:.6f} "
            f"nll={record.nll:.6f} acyclic={record.acyclic:.3e} sparse={record.sparse:.3e}"
        )

    def split(self, name: str) -> list[EpochRecord]:
        return [r for r in self.records if r.split == name]

    @property
    def final(self) -> EpochRecord:
        return self.records[-1]


def split_corpus(
    corpus: Sequence[EventSequence], fraction: float, rng: np.random.Generator
) -> tuple[list[EventSequence], list[EventSequence]]:
    """
    Split ``corpus`` into training and held-out parts.

    With fewer than two sequences, or a zero fraction, the whole corpus is
    used for both.
    """
    if len(corpus) < 2 or fraction <= 0:
        return list(corpus), list(corpus)
    order = rng.permutation(len(corpus))
    held_count = min(len(corpus) - 1, max(1, round(fraction * len(corpus))))
    held = [corpus[i] for i in sorted(order[:held_count])]
    train = [corpus[i] for i in sorted(order[held_count:])]
    return train, held


def _make_optimizer(leaves: list[torch.Tensor], cfg: TrainConfig) -> torch.optim.Optimizer:
    if cfg.optimizer is OptimizerKind.SGD:
        return torch.optim.SGD(leaves, lr=cfg.learning_rate)
    return torch.optim.Adam(
        leaves, lr=cfg.learning_rate, betas=cfg.adam_betas, eps=cfg.adam_eps
    )


def _run_epoch(
    train: list[EventSequence],
    working: ModelParameters,
    hp: HyperParameters,
    cfg: TrainConfig,
    optimizer: torch.optim.Optimizer,
    rng: np.random.Generator,
) -> LossBreakdown | None:
    """One pass over ``train``; returns the size-weighted mean loss, or None if any batch failed."""
    order = rng.permutation(len(train))
    sums = np.zeros(3)
    finite = True
    for start in range(0, len(order), cfg.batch_size):
        batch = [train[i] for i in order[start : start + cfg.batch_size]]
        try:
            loss, grads = loss_and_gradient(batch, working, hp)
        except NumericalError as e:
            logger.warning(f"Skipping batch with non-finite loss: {e}")
            finite = False
            continue
        optimizer.zero_grad()
        for leaf, grad in zip(working.tensors().values(), grads.tensors().values()):
            leaf.grad = grad
        optimizer.step()
        sums += len(batch) * np.array([loss.nll, loss.acyclic, loss.sparse])
    if not finite:
        return None
    nll_value, acyclic, sparse = sums / len(train)
    return LossBreakdown.compose(float(nll_value), float(acyclic), float(sparse))


def _held_out_loss(
    held: list[EventSequence], params: ModelParameters, hp: HyperParameters
) -> LossBreakdown:
    try:
        return evaluate_loss(held, params, hp)
    except NumericalError as e:
        logger.warning(f"Held-out evaluation failed: {e}")
        return LossBreakdown.compose(math.nan, math.nan, math.nan)


def fit(
    corpus: Sequence[EventSequence],
    params: ModelParameters,
    hp: HyperParameters,
    cfg: TrainConfig,
) -> tuple[ModelParameters, TrainingLog]:
    """
    Train ``params`` on ``corpus``.

    The run is deterministic given ``cfg.seed``. The returned parameters are
    those with the lowest held-out total loss. The last log record, with split
    ``final``, is the loss of the returned parameters on the whole corpus.

    Raises:
        DivergedError: after ``cfg.divergence_patience`` consecutive epochs
            with a non-finite loss.
    """
    if not corpus:
        raise EmptyCorpusError("corpus must contain at least one sequence")
    validate_corpus(corpus, hp.num_types)
    validate_parameters(params, hp)

    rng = np.random.default_rng(cfg.seed)
    train, held = split_corpus(corpus, cfg.validation_fraction, rng)
    logger.info(
        f"Training {hp.variant.value} on {len(train)} sequences "
        f"({len(held)} held out), K={hp.num_types}, L={hp.effective_order}"
    )

    working = params.detach().map(lambda t: t.requires_grad_(True))
    optimizer = _make_optimizer(list(working.tensors().values()), cfg)
    log = TrainingLog()
    best = params.detach()
    best_total = math.inf
    stale = 0
    non_finite = 0
    started = time.perf_counter()

    for epoch in range(1, cfg.max_epochs + 1):
        train_loss = _run_epoch(train, working, hp, cfg, optimizer, rng)
        snapshot = working.detach()
        held_loss = _held_out_loss(held, snapshot, hp)
        elapsed = time.perf_counter() - started

        if train_loss is None or not held_loss.is_finite():
            non_finite += 1
            logger.warning(f"Epoch {epoch} produced a non-finite loss ({non_finite} in a row)")
            if non_finite >= cfg.divergence_patience:
                raise DivergedError(epoch, non_finite)
            continue
        non_finite = 0

        log.append(EpochRecord.from_loss(epoch, "train", train_loss, elapsed))
        log.append(EpochRecord.from_loss(epoch, "heldout", held_loss, elapsed))

        if held_loss.total < best_total:
            best_total = held_loss.total
            best = snapshot
            log.best_epoch = epoch
            stale = 0
        else:
            stale += 1
            if stale >= cfg.early_stop_patience:
                log.stopped_early = True
                logger.info(f"Early stopping at epoch {epoch}; best epoch {log.best_epoch}")
                break

    final_loss = evaluate_loss(corpus, best, hp)
    log.append(
        EpochRecord.from_loss(
            log.best_epoch, "final", final_loss, time.perf_counter() - started
        )
    )
    gap_grid = np.linspace(0.0, settings.HORIZON_CAP_MULTIPLIER * corpus_mean_gap(corpus), 64)
    tail = kernel_profile(best, gap_grid[1:])[-1]
    logger.info(f"Decay kernel tail at {gap_grid[-1]:.4g}: {tail:.4g}")
    return best, log
