"""
Multi-order conditional intensity.

The order-``l`` intensity of type ``k`` at ``t`` sums, over every strictly
time-increasing chain of ``l`` history events, the product of hop weights
``W[k_{r-1}, k_r] * kappa(t_r - t_{r-1})`` with the last hop ending at
``(t, k)``. All hops use the weight matrix evaluated at the query time.

``order_intensity_bruteforce`` enumerates chains and is the reference;
``order_intensity_grid`` evaluates the same quantity for many queries at once
by dynamic programming over chain lengths.
"""

import itertools
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
import torch
import torch.nn.functional as F

from ..utils.errors import NonIncreasingChainError
from .decay import decay
from .events import Event, EventSequence
from .graph_learner import StructuralWeights
from .hyperparameters import HyperParameters
from .parameters import DTYPE, ModelParameters


@dataclass(frozen=True)
class IntensityBreakdown:
    """
    Intensity at ``t`` split into its parts.

    Attributes:
        t: Query time.
        lambda_total: (K,) final positive intensities.
        lambda_by_order: (L, K) order intensities before weighting by alpha.
        base: (K,) base rates mu_k.
        pre_activation: (K,) ``mu_k + sum_l alpha_k^(l) lambda_k^(l)``.
    """

    t: float
    lambda_total: np.ndarray
    lambda_by_order: np.ndarray
    base: np.ndarray
    pre_activation: np.ndarray


def _events_of(history: EventSequence | Sequence[Event]) -> tuple[Event, ...]:
    return tuple(history.events if isinstance(history, EventSequence) else history)


def first_order_influence(
    u: int, v: int, gap: float, Wt: StructuralWeights, params: ModelParameters
) -> float:
    """Influence ``W[u, v] * kappa(gap)`` of a type-``u`` event on type ``v``."""
    return float(Wt.W[u, v] * decay(gap, params))


def chain_influence(
    chain: Sequence[Event], Wt: StructuralWeights, params: ModelParameters
) -> float:
    """
    Product of hop influences along ``chain``; the last element is the query point.

    Raises:
        NonIncreasingChainError: if the chain times are not strictly increasing.
    """
    if len(chain) < 2:
        raise NonIncreasingChainError("A chain needs at least one hop")
    times = torch.tensor([e.t for e in chain], dtype=DTYPE)
    if not bool((times[1:] > times[:-1]).all()):
        raise NonIncreasingChainError(
            f"Chain times {[e.t for e in chain]} are not strictly increasing"
        )
    sources = [e.k for e in chain[:-1]]
    targets = [e.k for e in chain[1:]]
    hops = Wt.W[sources, targets] * decay(times[1:] - times[:-1], params)
    return float(torch.prod(hops))


def order_intensity_bruteforce(
    history: EventSequence | Sequence[Event],
    t: float,
    k: int,
    order: int,
    Wt: StructuralWeights,
    params: ModelParameters,
) -> float:
    """Order intensity by enumerating every chain; exponential in ``order``."""
    events = [e for e in _events_of(history) if e.t < t]
    query = Event(t, k)
    return sum(
        (
            chain_influence((*combo, query), Wt, params)
            for combo in itertools.combinations(events, order)
        ),
        0.0,
    )


def order_intensity_grid(
    times: torch.Tensor,
    types: torch.Tensor,
    query_times: torch.Tensor,
    weights: torch.Tensor,
    params: ModelParameters,
    num_orders: int,
    inclusive: torch.Tensor | None = None,
    max_history: int | None = None,
    query_decay: torch.Tensor | None = None,
) -> torch.Tensor:
    """
    Order intensities for many queries, shape (G, L, K).

    Args:
        times: (N,) history timestamps, strictly increasing.
        types: (N,) history type indices.
        query_times: (G,) query times.
        weights: (G, K, K) structural weights per query, or one (K, K) matrix.
        params: Model parameters (decay kernel).
        num_orders: Number of orders ``L`` to evaluate.
        inclusive: (G,) bool; a marked query also sees an event at its own time.
        max_history: Keep only the most recent ``max_history`` events per query.
        query_decay: (G, N) replacement for ``kappa(t_g - t_j)`` on the
            terminal hop, used to build thinning bounds.
    """
    num_queries = query_times.shape[0]
    num_types = weights.shape[-1]
    if weights.dim() == 2:
        weights = weights.expand(num_queries, num_types, num_types)
    if times.shape[0] == 0:
        return torch.zeros(num_queries, num_orders, num_types, dtype=DTYPE)
    if inclusive is None:
        inclusive = torch.zeros(num_queries, dtype=torch.bool)

    gaps = query_times[:, None] - times[None, :]
    at_query = inclusive[:, None].expand_as(gaps)
    active = (gaps > 0) | ((gaps == 0) & at_query)
    if max_history is not None:
        seen = active.sum(dim=1, keepdim=True)
        position = torch.arange(times.shape[0])[None, :]
        active = active & (position >= seen - max_history)
    mask = active.to(DTYPE)

    if query_decay is None:
        query_decay = decay(gaps, params, inclusive=at_query)
    terminal = query_decay * mask
    pair_decay = decay(times[None, :] - times[:, None], params)
    onehot = F.one_hot(types, num_types).to(DTYPE)
    into_event = weights[:, :, types]
    out_of_event = weights[:, types, :]

    chain_sums = mask
    orders = []
    for m in range(num_orders):
        if m > 0:
            by_type = torch.einsum("gi,iu,ij->guj", chain_sums, onehot, pair_decay)
            chain_sums = (by_type * into_event).sum(dim=1) * mask
        orders.append(torch.einsum("gj,gjk->gk", chain_sums * terminal, out_of_event))
    return torch.stack(orders, dim=1)


def order_intensity_dp(
    history: EventSequence | Sequence[Event],
    t: float,
    num_orders: int,
    Wt: StructuralWeights,
    params: ModelParameters,
    max_history: int | None = None,
) -> torch.Tensor:
    """Order intensities (L, K) at a single query time, history strictly before ``t``."""
    events = _events_of(history)
    times = torch.tensor([e.t for e in events], dtype=DTYPE)
    types = torch.tensor([e.k for e in events], dtype=torch.long)
    query = torch.tensor([t], dtype=DTYPE)
    return order_intensity_grid(
        times, types, query, Wt.W, params, num_orders, max_history=max_history
    )[0]


def combine_orders(
    order_values: torch.Tensor, params: ModelParameters, hp: HyperParameters
) -> tuple[torch.Tensor, torch.Tensor]:
    """
    Combine order intensities (..., L, K) into ``(lambda, pre_activation)``.

    ``pre_activation = mu + sum_l alpha[:, l] * order_values[l]`` and
    ``lambda = softplus(pre_activation) + epsilon``.
    """
    base = params.base_rates
    if hp.excitation_enabled:
        num_orders = order_values.shape[-2]
        alpha = params.order_weights[:, :num_orders].T
        pre = base + (alpha * order_values).sum(dim=-2)
    else:
        pre = base.expand(order_values.shape[:-2] + base.shape)
    return F.softplus(pre) + hp.epsilon, pre


def total_intensity(
    history: EventSequence | Sequence[Event],
    t: float,
    Wt: StructuralWeights,
    params: ModelParameters,
    hp: HyperParameters,
) -> IntensityBreakdown:
    """Intensity of every type at ``t`` given the history strictly before it."""
    with torch.no_grad():
        orders = order_intensity_dp(
            history, t, hp.effective_order, Wt, params, max_history=hp.max_history
        )
        lam, pre = combine_orders(orders, params, hp)
        return IntensityBreakdown(
            t=float(t),
            lambda_total=lam.numpy(),
            lambda_by_order=orders.numpy(),
            base=params.base_rates.detach().numpy(),
            pre_activation=pre.numpy(),
        )
