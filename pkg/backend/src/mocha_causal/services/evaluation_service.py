"""
Evaluation of trained models.

Predictive metrics (NLL per event, next-event time RMSE, type accuracy),
causal-path matching against declared ground-truth paths, and edge recovery
against a planted generator.
"""

import json
import logging
import math
import warnings
from collections.abc import Sequence
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np
import torch
from scipy.integrate import trapezoid
from sklearn.metrics import roc_auc_score

from ..config import settings
from ..core.analysis.causal_graph import threshold_graph
from ..core.events import Event, EventSequence, corpus_mean_gap, validate_corpus
from ..core.graph_learner import StructuralWeights, edge_activation
from ..core.likelihood import nll
from ..core.model import MochaModel, QueryPoints
from ..utils.concurrency import BatchProcessor
from ..utils.errors import (
    HorizonViolationError,
    HyperParameterError,
    PathSpecificationError,
    TruncatedExpectationWarning,
)
from .simulation_service import PlantedGenerator

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GroundTruthPath:
    """A declared causal path; the last type is the effect."""

    types: tuple[int, ...]
    label: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "types", tuple(int(k) for k in self.types))
        if not self.label:
            object.__setattr__(self, "label", "->".join(str(k) for k in self.types))

    def validate(self, num_types: int) -> None:
        if len(self.types) < 2:
            raise PathSpecificationError(f"Path '{self.label}' needs at least two types")
        if any(not 0 <= k < num_types for k in self.types):
            raise PathSpecificationError(
                f"Path '{self.label}' uses a type outside 0..{num_types - 1}"
            )

    def edges(self) -> list[tuple[int, int]]:
        return list(zip(self.types[:-1], self.types[1:]))

    @property
    def terminal(self) -> int:
        return self.types[-1]


def read_paths(path: Path) -> list[GroundTruthPath]:
    """
    Read ground-truth paths, one JSON object per line::

        {"label": "A->B->C", "path": [0, 1, 2]}
    """
    paths = []
    for line_number, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
            paths.append(GroundTruthPath(tuple(record["path"]), str(record.get("label", ""))))
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as e:
            raise PathSpecificationError(f"{path}:{line_number}: {e}") from e
    return paths


def write_paths(path: Path, paths: Sequence[GroundTruthPath]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [json.dumps({"label": p.label, "path": list(p.types)}) for p in paths]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


@dataclass(frozen=True)
class NextEventPrediction:
    t_hat: float
    k_hat: int
    missing_mass: float


def next_event_prediction(
    prefix: EventSequence,
    model: MochaModel,
    horizon_cap: float,
    grid_points: int = settings.PREDICTION_GRID_POINTS,
) -> NextEventPrediction:
    """
    Expected time and most likely type of the next event after ``prefix``.

    The next-event density ``p(s) = lambda(s) exp(-int lambda)`` is integrated
    with the trapezoidal rule over ``(t_last, t_last + horizon_cap]``. A
    ``TruncatedExpectationWarning`` is issued when the mass beyond the cap is
    at least ``TRUNCATION_MASS_WARNING``.
    """
    if horizon_cap <= 0:
        raise HyperParameterError(f"horizon_cap must be positive, got {horizon_cap}")
    t_last = float(prefix.times[-1]) if len(prefix) else 0.0
    gaps = np.linspace(0.0, horizon_cap, grid_points + 1)
    inclusive = np.zeros(len(gaps), dtype=bool)
    inclusive[0] = True
    rate = model.total_rate(prefix, QueryPoints(t_last + gaps, inclusive))

    steps = np.diff(gaps)
    cumulative = np.concatenate([[0.0], np.cumsum(0.5 * steps * (rate[1:] + rate[:-1]))])
    density = rate * np.exp(-cumulative)
    expected_gap = float(trapezoid(gaps * density, gaps))
    missing_mass = float(np.exp(-cumulative[-1]))
    if missing_mass >= settings.TRUNCATION_MASS_WARNING:
        message = (
            f"{missing_mass:.1%} of the next-event mass after t={t_last:.4g} lies "
            f"beyond the cap {horizon_cap:.4g}"
        )
        logger.warning(message)
        warnings.warn(message, TruncatedExpectationWarning, stacklevel=2)

    t_hat = t_last + expected_gap
    lam = model.intensity(prefix, t_hat).lambda_total
    return NextEventPrediction(t_hat=t_hat, k_hat=int(np.argmax(lam)), missing_mass=missing_mass)


def score_predictions(
    predicted: Sequence[tuple[float, int]], observed: Sequence[Event]
) -> tuple[float, float]:
    """RMSE of predicted times and accuracy of predicted types."""
    if len(predicted) != len(observed):
        raise ValueError("predicted and observed must have the same length")
    if not predicted:
        return math.nan, math.nan
    squared = [(t_hat - e.t) ** 2 for (t_hat, _), e in zip(predicted, observed)]
    hits = sum(k_hat == e.k for (_, k_hat), e in zip(predicted, observed))
    return math.sqrt(math.fsum(squared) / len(squared)), hits / len(predicted)


@dataclass(frozen=True)
class MetricsReport:
    """Summary document of :func:`metrics`."""

    nll_per_event: float
    nll: float
    rmse: float
    accuracy: float
    num_sequences: int
    num_events: int
    num_predictions: int
    horizon_cap: float
    sequences: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class _SequenceResult:
    nll: float
    predicted: list[tuple[float, int]]
    observed: list[Event]


def metrics(
    corpus: Sequence[EventSequence],
    model: MochaModel,
    horizon_cap: float | None = None,
    grid_points: int = settings.PREDICTION_GRID_POINTS,
    max_workers: int = 1,
) -> MetricsReport:
    """
    NLL per event, next-event RMSE and type accuracy over ``corpus``.

    The first event of every sequence is not predicted. ``nll`` is the mean
    per-sequence NLL, the same quantity the training log reports.
    """
    validate_corpus(corpus, model.hp.num_types)
    cap = horizon_cap or settings.HORIZON_CAP_MULTIPLIER * corpus_mean_gap(corpus)

    def evaluate(seq: EventSequence) -> _SequenceResult:
        predicted = []
        for i in range(1, len(seq)):
            prefix = EventSequence(seq.events[:i], seq.horizon, seq.seq_id, allow_empty=True)
            prediction = next_event_prediction(prefix, model, cap, grid_points)
            predicted.append((prediction.t_hat, prediction.k_hat))
        return _SequenceResult(nll(seq, model.params, model.hp), predicted, list(seq.events[1:]))

    results = BatchProcessor.process_ordered(list(corpus), evaluate, max_workers)
    predicted = [p for r in results for p in r.predicted]
    observed = [e for r in results for e in r.observed]
    rmse, accuracy = score_predictions(predicted, observed)
    # summed in corpus order, exactly like the training objective
    total_nll = 0.0
    for r in results:
        total_nll += r.nll
    num_events = sum(len(seq) for seq in corpus)
    report = MetricsReport(
        nll_per_event=total_nll / num_events if num_events else math.nan,
        nll=total_nll / len(corpus),
        rmse=rmse,
        accuracy=accuracy,
        num_sequences=len(corpus),
        num_events=num_events,
        num_predictions=len(predicted),
        horizon_cap=cap,
        sequences=[
            {
                "seq_id": seq.seq_id,
                "nll": r.nll,
                "num_events": len(seq),
                "num_predictions": len(r.predicted),
            }
            for seq, r in zip(corpus, results)
        ],
    )
    logger.info(
        f"NLL/event={report.nll_per_event:.4f} RMSE={report.rmse:.4f} "
        f"accuracy={report.accuracy:.4f} over {report.num_predictions} predictions"
    )
    return report


@dataclass(frozen=True)
class PathMatch:
    label: str
    types: tuple[int, ...]
    matched: int
    occurrences: int

    @property
    def rate(self) -> float:
        return self.matched / self.occurrences if self.occurrences else 0.0

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "path": list(self.types),
            "matched": self.matched,
            "occurrences": self.occurrences,
            "rate": self.rate,
        }


def path_matching_rate(
    corpus: Sequence[EventSequence],
    model: MochaModel,
    paths: Sequence[GroundTruthPath],
    terminal_type: int,
    theta: float | None = None,
) -> list[PathMatch]:
    """
    Share of terminal-type occurrences at which every edge of a path is present.

    The graph at an occurrence is extracted at its exact timestamp from the
    history strictly before it. ``theta`` defaults to the model's threshold.
    """
    K = model.hp.num_types
    if not 0 <= terminal_type < K:
        raise PathSpecificationError(f"Terminal type {terminal_type} is outside 0..{K - 1}")
    for path in paths:
        path.validate(K)
        if path.terminal != terminal_type:
            raise PathSpecificationError(
                f"Path '{path.label}' ends in {path.terminal}, not the terminal type {terminal_type}"
            )

    matched = [0] * len(paths)
    occurrences = 0
    for seq in corpus:
        times = seq.times[seq.types == terminal_type]
        if len(times) == 0:
            continue
        with torch.no_grad():
            weights = model.weights_at(seq, QueryPoints.exclusive(times))
        for t, W in zip(times, weights):
            graph = threshold_graph(StructuralWeights(float(t), W), model.hp, theta)
            occurrences += 1
            for index, path in enumerate(paths):
                if all(graph.has_edge(u, v) for u, v in path.edges()):
                    matched[index] += 1
    if occurrences == 0:
        logger.warning(f"Terminal type {terminal_type} never occurs in the corpus")
    return [
        PathMatch(path.label, path.types, matched[i], occurrences)
        for i, path in enumerate(paths)
    ]


def edge_scores(
    model: MochaModel, probe_times: Sequence[float], corpus: Sequence[EventSequence]
) -> np.ndarray:
    """Mean edge activation of every ordered pair over all (sequence, probe) pairs."""
    total = np.zeros((model.hp.num_types, model.hp.num_types))
    count = 0
    for seq in corpus:
        probes = np.asarray([t for t in probe_times if t <= seq.horizon], dtype=np.float64)
        if len(probes) == 0:
            continue
        with torch.no_grad():
            weights = model.weights_at(seq, QueryPoints.exclusive(probes))
        total += edge_activation(weights, model.hp.beta).sum(dim=0).numpy()
        count += len(probes)
    if count == 0:
        raise HorizonViolationError("No probe time lies within any sequence horizon")
    return total / count


def auc_from_scores(scores: np.ndarray, adjacency: np.ndarray) -> float:
    """ROC AUC of pair scores against a true adjacency, diagonal excluded."""
    off_diagonal = ~np.eye(len(adjacency), dtype=bool)
    labels = np.asarray(adjacency)[off_diagonal].astype(int)
    if labels.min() == labels.max():
        raise PathSpecificationError("Edge recovery needs both edges and non-edges")
    return float(roc_auc_score(labels, np.asarray(scores)[off_diagonal]))


def edge_recovery_auc(
    model: MochaModel,
    planted: PlantedGenerator,
    probe_times: Sequence[float],
    corpus: Sequence[EventSequence],
) -> float:
    """AUC of the mean edge activations against the planted edge set."""
    if planted.num_types != model.hp.num_types:
        raise PathSpecificationError(
            f"Generator has {planted.num_types} types, model has {model.hp.num_types}"
        )
    auc = auc_from_scores(edge_scores(model, probe_times, corpus), planted.adjacency())
    logger.info(f"Edge recovery AUC: {auc:.4f}")
    return auc
