"""
Event-sequence simulation.

This module samples sequences by Ogata thinning, either from a trained model
or from a ``PlantedGenerator`` (a classical exponential-kernel Hawkes process
with a known causal DAG used as ground truth), and provides time-rescaling
residuals with a Kolmogorov-Smirnov goodness-of-fit test.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import networkx as nx
import numpy as np
import torch
import yaml
from scipy import stats

from ..config import settings
from ..core.decay import decay
from ..core.events import Event, EventSequence
from ..core.intensity import order_intensity_grid
from ..core.likelihood import compensator_increments
from ..core.model import MochaModel, QueryPoints
from ..core.parameters import DTYPE
from ..utils.concurrency import BatchProcessor
from ..utils.errors import (
    BoundViolationError,
    HorizonViolationError,
    PathSpecificationError,
)

logger = logging.getLogger(__name__)

Seed = int | tuple[int, ...]


@dataclass(frozen=True)
class PlantedGenerator:
    """
    Exponential-kernel Hawkes process with a planted causal DAG.

    ``lambda_v(t) = mu_v + sum_{t_j < t} w[k_j, v] * exp(-decay_rate (t - t_j))``

    Attributes:
        num_types: Number of event types ``K``.
        edges: Mapping ``(u, v) -> weight`` of the planted edges ``u -> v``.
        decay_rate: Rate of the exponential kernel.
        mu: Base rate of every type.
        paths: Declared ground-truth multi-hop paths as lists of type indices.
    """

    num_types: int
    edges: dict[tuple[int, int], float]
    decay_rate: float
    mu: tuple[float, ...]
    paths: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "edges", {(int(u), int(v)): float(w) for (u, v), w in self.edges.items()}
        )
        object.__setattr__(self, "mu", tuple(float(m) for m in self.mu))
        object.__setattr__(self, "paths", tuple(tuple(int(k) for k in p) for p in self.paths))
        self.validate()

    def validate(self) -> None:
        """
        Raises:
            PathSpecificationError: if the edge set has a cycle, a rate is not
                positive, or an index is out of range.
        """
        K = self.num_types
        if K < 2 or len(self.mu) != K:
            raise PathSpecificationError(f"Expected {K} base rates, got {len(self.mu)}")
        if self.decay_rate <= 0 or any(m <= 0 for m in self.mu):
            raise PathSpecificationError("Decay rate and base rates must be positive")
        for (u, v), weight in self.edges.items():
            if not (0 <= u < K and 0 <= v < K):
                raise PathSpecificationError(f"Edge {u}->{v} is outside 0..{K - 1}")
            if weight <= 0:
                raise PathSpecificationError(f"Edge {u}->{v} has non-positive weight")
        if not nx.is_directed_acyclic_graph(self.graph()):
            raise PathSpecificationError("Planted edge set must be acyclic")
        for path in self.paths:
            if len(path) < 2 or any(not 0 <= k < K for k in path):
                raise PathSpecificationError(f"Invalid planted path {list(path)}")
        spectral_radius = max(abs(np.linalg.eigvals(self.weight_matrix()))) / self.decay_rate
        if spectral_radius >= 1:
            logger.warning(f"Planted process is explosive (branching ratio {spectral_radius:.3f})")

    def graph(self) -> nx.DiGraph:
        graph = nx.DiGraph()
        graph.add_nodes_from(range(self.num_types))
        graph.add_edges_from(self.edges)
        return graph

    def weight_matrix(self) -> np.ndarray:
        W = np.zeros((self.num_types, self.num_types))
        for (u, v), weight in self.edges.items():
            W[u, v] = weight
        return W

    def adjacency(self) -> np.ndarray:
        return (self.weight_matrix() > 0).astype(np.int64)

    def intensity(self, seq: EventSequence, t: float) -> np.ndarray:
        """Intensity of every type at ``t`` with history strictly before it."""
        before = seq.times < t
        kernel = np.exp(-self.decay_rate * (t - seq.times[before]))
        return np.asarray(self.mu) + kernel @ self.weight_matrix()[seq.types[before]]

    def compensator_increments(self, seq: EventSequence) -> np.ndarray:
        """Closed-form integrated total intensity over each knot interval, shape (N + 1,)."""
        W = self.weight_matrix()
        knots = np.concatenate([[0.0], seq.times, [seq.horizon]])
        base_total = float(np.sum(self.mu))
        state = np.zeros(self.num_types)
        increments = np.empty(len(knots) - 1)
        for i in range(len(knots) - 1):
            gap = knots[i + 1] - knots[i]
            if i > 0:
                state = state + W[seq.types[i - 1]]
            increments[i] = base_total * gap + state.sum() * -np.expm1(
                -self.decay_rate * gap
            ) / self.decay_rate
            state = state * np.exp(-self.decay_rate * gap)
        return increments

    def to_dict(self) -> dict[str, Any]:
        return {
            "num_types": self.num_types,
            "edges": [[u, v, w] for (u, v), w in sorted(self.edges.items())],
            "decay_rate": self.decay_rate,
            "mu": list(self.mu),
            "paths": [list(p) for p in self.paths],
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "PlantedGenerator":
        try:
            num_types = int(data["num_types"])
            mu = data["mu"]
            if isinstance(mu, (int, float)):
                mu = [float(mu)] * num_types
            return cls(
                num_types=num_types,
                edges={(int(u), int(v)): float(w) for u, v, w in data.get("edges", [])},
                decay_rate=float(data["decay_rate"]),
                mu=tuple(mu),
                paths=tuple(tuple(p) for p in data.get("paths", [])),
            )
        except (KeyError, TypeError, ValueError) as e:
            raise PathSpecificationError(f"Invalid generator description: {e}") from e


def default_planted_generator() -> PlantedGenerator:
    """Five types, four planted edges and two declared two-hop paths."""
    return PlantedGenerator(
        num_types=5,
        edges={(0, 1): 0.7, (1, 2): 0.7, (0, 3): 0.6, (3, 4): 0.6},
        decay_rate=1.0,
        mu=(0.3, 0.05, 0.05, 0.05, 0.05),
        paths=((0, 1, 2), (0, 3, 4)),
    )


def chain_planted_generator(num_types: int, weight: float = 0.8) -> PlantedGenerator:
    """A single chain ``0 -> 1 -> ... -> K-1``, rich in multi-hop influence."""
    return PlantedGenerator(
        num_types=num_types,
        edges={(k, k + 1): weight for k in range(num_types - 1)},
        decay_rate=1.0,
        mu=(0.4,) + (0.02,) * (num_types - 1),
        paths=(tuple(range(num_types)),),
    )


def read_generator(path: Path) -> PlantedGenerator:
    """Read a declarative generator description (YAML, or JSON as a subset of it)."""
    try:
        data = yaml.safe_load(path.read_text(encoding="utf-8"))
    except (OSError, yaml.YAMLError) as e:
        raise PathSpecificationError(f"Cannot read generator file {path}: {e}") from e
    if not isinstance(data, dict):
        raise PathSpecificationError(f"Generator file {path} is not a mapping")
    return PlantedGenerator.from_dict(data)


def write_generator(path: Path, generator: PlantedGenerator) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(yaml.safe_dump(generator.to_dict(), sort_keys=False), encoding="utf-8")


@dataclass
class _ThinningBound:
    value: float
    valid_until: float


@dataclass
class ThinningSampler:
    """
    Ogata thinning for a trained model.

    The bound on ``[t, t + staleness_horizon]`` takes the elementwise maximum of
    ``|W|`` over probe points and, per history event, the maximum of the decay
    kernel over the window. It is multiplied by ``safety_factor`` and refreshed
    after every acceptance and whenever a proposal passes the window end.
    """

    model: MochaModel
    safety_factor: float = settings.THINNING_SAFETY_FACTOR
    staleness_horizon: float = settings.THINNING_STALENESS_HORIZON
    probe_points: int = settings.THINNING_PROBE_POINTS
    kappa_probe_points: int = settings.KAPPA_PROBE_POINTS
    max_events: int = settings.MAX_SIMULATED_EVENTS
    refreshes: int = field(default=0, init=False)

    def bound(self, seq: EventSequence, t: float) -> _ThinningBound:
        """Upper bound on the total intensity over the window starting at ``t``."""
        model = self.model
        hp = model.hp
        end = t + self.staleness_horizon
        self.refreshes += 1
        with torch.no_grad():
            base = model.params.base_rates
            if not hp.excitation_enabled or len(seq) == 0:
                lam = torch.nn.functional.softplus(base) + hp.epsilon
                return _ThinningBound(self.safety_factor * float(lam.sum()), end)

            probe = QueryPoints(
                np.linspace(t, end, self.probe_points),
                np.r_[True, np.zeros(self.probe_points - 1, dtype=bool)],
            )
            weight_bound = model.weights_at(seq, probe).abs().amax(dim=0)

            times = torch.as_tensor(seq.times, dtype=DTYPE)
            window = torch.linspace(t, end, self.kappa_probe_points, dtype=DTYPE)
            gaps = window[:, None] - times[None, :]
            kappa = decay(gaps, model.params, inclusive=torch.ones_like(gaps, dtype=torch.bool))
            kappa_bound = kappa.amax(dim=0)

            orders = order_intensity_grid(
                times,
                torch.as_tensor(seq.types, dtype=torch.long),
                torch.tensor([t], dtype=DTYPE),
                weight_bound,
                model.params,
                hp.effective_order,
                inclusive=torch.tensor([True]),
                max_history=hp.max_history,
                query_decay=kappa_bound[None, :],
            )[0]
            alpha = model.params.order_weights[:, : hp.effective_order].T
            pre = base + (alpha * orders).sum(dim=0)
            lam = torch.nn.functional.softplus(pre) + hp.epsilon
        return _ThinningBound(self.safety_factor * float(lam.sum()), end)

    def sample(self, horizon: float, seed: Seed, seq_id: str = "") -> EventSequence:
        """
        Simulate one sequence on [0, horizon].

        Raises:
            BoundViolationError: if an evaluated intensity exceeds the current bound.
        """
        rng = np.random.default_rng(seed)
        events: list[Event] = []
        current = EventSequence((), horizon, seq_id=seq_id, allow_empty=True)
        t = 0.0
        bound = self.bound(current, t)
        while len(events) < self.max_events:
            proposal = t + rng.exponential(1.0 / bound.value)
            # A proposal past the window end says nothing about later windows
            if proposal > bound.valid_until and bound.valid_until < horizon:
                t = bound.valid_until
                bound = self.bound(current, t)
                continue
            if proposal > horizon:
                break
            t = proposal
            with torch.no_grad():
                lam = self.model.evaluate(current, QueryPoints.exclusive([t])).lam[0].numpy()
            total = float(lam.sum())
            if total > bound.value:
                raise BoundViolationError(t, total, bound.value)
            if rng.uniform() * bound.value > total or (events and t <= events[-1].t):
                continue
            k = int(rng.choice(len(lam), p=lam / total))
            events.append(Event(t, k))
            current = EventSequence(tuple(events), horizon, seq_id=seq_id, allow_empty=True)
            bound = self.bound(current, t)
        else:
            logger.warning(f"Simulation stopped at max_events={self.max_events} (t={t:.4g})")
        return current


def _simulate_planted(
    generator: PlantedGenerator,
    horizon: float,
    seed: Seed,
    seq_id: str,
    max_events: int,
) -> EventSequence:
    """Exact thinning: the exponential-kernel intensity only decays between events."""
    rng = np.random.default_rng(seed)
    W = generator.weight_matrix()
    mu = np.asarray(generator.mu)
    state = np.zeros(generator.num_types)
    events: list[Event] = []
    t = 0.0
    while len(events) < max_events:
        bound = float((mu + state).sum())
        gap = rng.exponential(1.0 / bound)
        if t + gap > horizon:
            break
        state = state * np.exp(-generator.decay_rate * gap)
        t += gap
        lam = mu + state
        total = float(lam.sum())
        if rng.uniform() * bound > total or (events and t <= events[-1].t):
            continue
        k = int(rng.choice(generator.num_types, p=lam / total))
        events.append(Event(t, k))
        state = state + W[k]
    else:
        logger.warning(f"Planted simulation stopped at max_events={max_events}")
    return EventSequence(tuple(events), horizon, seq_id=seq_id, allow_empty=True)


def simulate(
    source: "MochaModel | PlantedGenerator",
    horizon: float,
    seed: Seed,
    seq_id: str = "",
    max_events: int = settings.MAX_SIMULATED_EVENTS,
    **thinning_options: Any,
) -> EventSequence:
    """
    Simulate one sequence on [0, horizon] from a model or a planted generator.

    Args:
        source: Trained model or planted generator.
        horizon: Window end ``T``; must be positive.
        seed: Integer seed or tuple of integers for the random stream.
        seq_id: Identifier of the produced sequence.
        max_events: Hard cap on the number of events.
        **thinning_options: Overrides for :class:`ThinningSampler` fields.
    """
    if horizon <= 0:
        raise HorizonViolationError(f"horizon must be positive, got {horizon}", seq_id)
    if isinstance(source, PlantedGenerator):
        return _simulate_planted(source, horizon, seed, seq_id, max_events)
    sampler = ThinningSampler(source, max_events=max_events, **thinning_options)
    return sampler.sample(horizon, seed, seq_id)


def simulate_corpus(
    source: "MochaModel | PlantedGenerator",
    num_sequences: int,
    horizon: float,
    seed: int,
    max_workers: int = 1,
    **options: Any,
) -> list[EventSequence]:
    """Simulate ``num_sequences`` sequences, sequence ``i`` using the stream ``(seed, i)``."""

    def run(index: int) -> EventSequence:
        return simulate(source, horizon, (seed, index), seq_id=f"seq-{index:05d}", **options)

    corpus = BatchProcessor.process_ordered(list(range(num_sequences)), run, max_workers)
    logger.info(
        f"Simulated {num_sequences} sequences with {sum(len(s) for s in corpus)} events"
    )
    return corpus


def time_rescaling_residuals(
    seq: EventSequence, source: "MochaModel | PlantedGenerator"
) -> np.ndarray:
    """Integrated total intensity between consecutive events, starting from 0."""
    if isinstance(source, PlantedGenerator):
        increments = source.compensator_increments(seq)
    else:
        increments = compensator_increments(seq, source.params, source.hp)
    return increments[: len(seq)]


@dataclass(frozen=True)
class GoodnessOfFit:
    """Kolmogorov-Smirnov test of residuals against the unit exponential."""

    statistic: float
    p_value: float
    sample_size: int

    def rejects(self, level: float = 0.01) -> bool:
        return self.p_value < level


def goodness_of_fit(residuals: Sequence[float] | np.ndarray) -> GoodnessOfFit:
    """KS test of ``residuals`` against Exp(1)."""
    residuals = np.asarray(residuals, dtype=np.float64)
    result = stats.kstest(residuals, "expon")
    return GoodnessOfFit(
        statistic=float(result.statistic),
        p_value=float(result.pvalue),
        sample_size=len(residuals),
    )


def random_toy_corpus(
    num_types: int,
    num_sequences: int,
    max_events: int,
    seed: int,
    horizon: float = 5.0,
) -> list[EventSequence]:
    """Small uniformly random sequences (2 to ``max_events`` events) for gradient checks."""
    rng = np.random.default_rng(seed)
    corpus = []
    for index in range(num_sequences):
        count = int(rng.integers(2, max(2, max_events) + 1))
        times = np.sort(rng.uniform(0.05 * horizon, 0.95 * horizon, size=count))
        types = rng.integers(0, num_types, size=count)
        corpus.append(
            EventSequence.from_arrays(times, types, horizon, seq_id=f"toy-{index:03d}")
        )
    return corpus
