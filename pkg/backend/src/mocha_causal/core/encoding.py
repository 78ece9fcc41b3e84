"""Sinusoidal time-gap encoding and the per-type dynamic embedding matrix."""

from dataclasses import dataclass

import numpy as np
import torch

from .parameters import DTYPE, ModelParameters

FREQUENCY_BASE = 10000.0


def positional_encoding(x: float | np.ndarray | torch.Tensor, d: int) -> torch.Tensor:
    """
    Encode ``x`` into ``2d`` components.

    Component ``i < d`` is ``sin(x / 10000^(i/d))`` and component ``i + d`` is
    ``cos(x / 10000^(i/d))``. Works elementwise over any leading shape.
    """
    x = torch.as_tensor(x, dtype=DTYPE)
    exponents = torch.arange(d, dtype=DTYPE) / d
    angles = x[..., None] / torch.pow(torch.tensor(FREQUENCY_BASE, dtype=DTYPE), exponents)
    return torch.cat([torch.sin(angles), torch.cos(angles)], dim=-1)


@dataclass(frozen=True)
class TypeStateAtTime:
    """Last occurrence of each type before ``t``; NaN marks a type that has not occurred."""

    t: float
    t_last: np.ndarray
    tau: np.ndarray

    def occurred(self) -> np.ndarray:
        return ~np.isnan(self.t_last)


def last_occurrence_times(
    times: np.ndarray,
    types: np.ndarray,
    query_times: np.ndarray,
    num_types: int,
    inclusive: np.ndarray | bool = False,
) -> np.ndarray:
    """
    Last occurrence time of every type before each query, shape (G, K).

    A query marked ``inclusive`` also sees an event at exactly its own time.
    Types without an occurrence get NaN.
    """
    query_times = np.asarray(query_times, dtype=np.float64)
    inclusive = np.broadcast_to(np.asarray(inclusive, dtype=bool), query_times.shape)
    result = np.full((len(query_times), num_types), np.nan)
    for k in range(num_types):
        times_k = times[types == k]
        if len(times_k) == 0:
            continue
        left = np.searchsorted(times_k, query_times, side="left")
        right = np.searchsorted(times_k, query_times, side="right")
        count = np.where(inclusive, right, left)
        seen = count > 0
        result[seen, k] = times_k[count[seen] - 1]
    return result


def last_occurrence_gaps(
    times: np.ndarray,
    types: np.ndarray,
    query_times: np.ndarray,
    num_types: int,
    inclusive: np.ndarray | bool = False,
) -> np.ndarray:
    """Gaps ``tau`` (G, K); a type that never occurred gets the query time itself."""
    query_times = np.asarray(query_times, dtype=np.float64)
    t_last = last_occurrence_times(times, types, query_times, num_types, inclusive)
    tau = query_times[:, None] - t_last
    return np.where(np.isnan(t_last), query_times[:, None], tau)


def type_state(
    times: np.ndarray,
    types: np.ndarray,
    t: float,
    num_types: int,
    inclusive: bool = False,
) -> TypeStateAtTime:
    """State of all types at a single query time."""
    query = np.array([t], dtype=np.float64)
    t_last = last_occurrence_times(times, types, query, num_types, inclusive)[0]
    tau = np.where(np.isnan(t_last), t, t - t_last)
    return TypeStateAtTime(t=float(t), t_last=t_last, tau=tau)


def build_embeddings(
    state: TypeStateAtTime | np.ndarray | torch.Tensor, params: ModelParameters
) -> torch.Tensor:
    """Dynamic embeddings ``H``: row k is ``PE(tau_k) + E_type[k]``, shape (..., K, 2d)."""
    tau = state.tau if isinstance(state, TypeStateAtTime) else state
    half_dim = params.type_embed.shape[1] // 2
    return positional_encoding(tau, half_dim) + params.type_embed
