"""
Model facade.

``MochaModel`` composes encoding, graph attention, decay and intensity for any
set of query points over one sequence. A query point carries an ``inclusive``
flag: inclusive queries see an event at exactly their own time (the right
limit at an event), exclusive ones do not (the left limit).
"""

import logging
from dataclasses import dataclass

import numpy as np
import torch

from .analysis.causal_graph import CausalGraph, threshold_graph
from .encoding import build_embeddings, last_occurrence_gaps
from .events import EventSequence
from .graph_learner import (
    StructuralWeights,
    edge_activation,
    static_weight_matrix,
    structural_weight_matrix,
)
from .hyperparameters import HyperParameters, ModelVariant
from .intensity import IntensityBreakdown, combine_orders, order_intensity_grid
from .parameters import DTYPE, ModelParameters

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class QueryPoints:
    """Query times with their one-sided limit flags."""

    times: np.ndarray
    inclusive: np.ndarray

    @classmethod
    def exclusive(cls, times) -> "QueryPoints":
        times = np.asarray(times, dtype=np.float64).reshape(-1)
        return cls(times, np.zeros(len(times), dtype=bool))

    @classmethod
    def concat(cls, *parts: "QueryPoints") -> "QueryPoints":
        return cls(
            np.concatenate([p.times for p in parts]),
            np.concatenate([p.inclusive for p in parts]),
        )

    def __len__(self) -> int:
        return len(self.times)


@dataclass(frozen=True)
class IntensityEvaluation:
    """Intensities (G, K), pre-activations (G, K), order intensities (G, L, K) and weights (G, K, K)."""

    lam: torch.Tensor
    pre_activation: torch.Tensor
    orders: torch.Tensor
    weights: torch.Tensor


class MochaModel:
    """
    Conditional intensity of the multi-order model.

    Args:
        params: Learnable tensors; gradients flow through them when they require grad.
        hp: Hyper-parameters, including the model variant.
    """

    def __init__(self, params: ModelParameters, hp: HyperParameters) -> None:
        self.params = params
        self.hp = hp

    def _variant_mask(self, W: torch.Tensor) -> torch.Tensor:
        if self.hp.variant is ModelVariant.HAWKES_UNI:
            return W * torch.eye(self.hp.num_types, dtype=DTYPE)
        return W

    def weights_at(self, seq: EventSequence, queries: QueryPoints) -> torch.Tensor:
        """Structural weights (G, K, K) at every query point."""
        K = self.hp.num_types
        if not self.hp.is_dynamic:
            W = self._variant_mask(static_weight_matrix(self.params))
            return W.expand(len(queries), K, K)

        query_times = queries.times
        inclusive = queries.inclusive
        if self.hp.freeze_weights_between_events:
            # hold weights at the most recent event at or before the query
            count = np.searchsorted(seq.times, query_times, side="right")
            query_times = np.where(count > 0, seq.times[np.maximum(count - 1, 0)], 0.0)
            inclusive = np.ones(len(query_times), dtype=bool)
        tau = last_occurrence_gaps(seq.times, seq.types, query_times, K, inclusive)
        H = build_embeddings(torch.as_tensor(tau, dtype=DTYPE), self.params)
        return structural_weight_matrix(H, self.params)

    def evaluate(
        self,
        seq: EventSequence,
        queries: QueryPoints,
        mask_by_adjacency: bool = False,
        weights: torch.Tensor | None = None,
    ) -> IntensityEvaluation:
        """
        Intensities of all types at every query point.

        Args:
            seq: Sequence whose events form the history.
            queries: Query points.
            mask_by_adjacency: Zero the weights of edges below the threshold
                before evaluating chains.
            weights: Precomputed weights (G, K, K) to use instead of
                :meth:`weights_at`.
        """
        W = self.weights_at(seq, queries) if weights is None else weights
        chain_weights = W
        if mask_by_adjacency:
            keep = edge_activation(W.detach(), self.hp.beta) > self.hp.theta
            chain_weights = W * keep.to(DTYPE)
        orders = order_intensity_grid(
            torch.as_tensor(seq.times, dtype=DTYPE),
            torch.as_tensor(seq.types, dtype=torch.long),
            torch.as_tensor(queries.times, dtype=DTYPE),
            chain_weights,
            self.params,
            self.hp.effective_order,
            inclusive=torch.as_tensor(queries.inclusive, dtype=torch.bool),
            max_history=self.hp.max_history,
        )
        lam, pre = combine_orders(orders, self.params, self.hp)
        return IntensityEvaluation(lam=lam, pre_activation=pre, orders=orders, weights=W)

    def structural_weights(
        self, seq: EventSequence, t: float, inclusive: bool = False
    ) -> StructuralWeights:
        queries = QueryPoints(np.array([t], dtype=np.float64), np.array([inclusive]))
        with torch.no_grad():
            return StructuralWeights(t=float(t), W=self.weights_at(seq, queries)[0])

    def causal_graph(
        self,
        seq: EventSequence,
        t: float,
        theta: float | None = None,
        inclusive: bool = False,
    ) -> CausalGraph:
        """Thresholded graph at ``t`` using the history strictly before it by default."""
        return threshold_graph(self.structural_weights(seq, t, inclusive), self.hp, theta)

    def intensity(
        self, seq: EventSequence, t: float, mask_by_adjacency: bool = False
    ) -> IntensityBreakdown:
        """Intensity breakdown at ``t`` with the history strictly before it."""
        with torch.no_grad():
            result = self.evaluate(
                seq, QueryPoints.exclusive([t]), mask_by_adjacency=mask_by_adjacency
            )
        return IntensityBreakdown(
            t=float(t),
            lambda_total=result.lam[0].numpy(),
            lambda_by_order=result.orders[0].numpy(),
            base=self.params.base_rates.detach().numpy(),
            pre_activation=result.pre_activation[0].numpy(),
        )

    def total_rate(self, seq: EventSequence, queries: QueryPoints) -> np.ndarray:
        """Summed intensity over types at every query point."""
        with torch.no_grad():
            return self.evaluate(seq, queries).lam.sum(dim=-1).numpy()
