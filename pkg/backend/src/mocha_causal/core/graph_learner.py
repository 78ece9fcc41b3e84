"""
Graph attention over the dynamic type embeddings.

Produces the structural weight matrix ``W`` (entry ``[u, v]`` is the strength of
``u -> v``) together with the acyclicity and sparsity penalties on it. All
functions accept a leading batch of query times.
"""

import logging
import warnings
from dataclasses import dataclass

import numpy as np
import torch
import torch.nn.functional as F

from ..config import settings
from ..utils.errors import NumericOverflowError, TruncatedSeriesWarning
from .parameters import DTYPE, ModelParameters

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class StructuralWeights:
    """Structural weight matrix ``W`` (K, K) at query time ``t``."""

    t: float
    W: torch.Tensor

    def __post_init__(self) -> None:
        if not torch.isfinite(self.W).all():
            raise NumericOverflowError(f"Structural weights at t={self.t} are not finite")

    @property
    def num_types(self) -> int:
        return int(self.W.shape[-1])

    def numpy(self) -> np.ndarray:
        return self.W.detach().cpu().numpy()


def attention_scores(H: torch.Tensor, params: ModelParameters) -> torch.Tensor:
    """Scores ``e[u, v] = LeakyReLU(a . [W_Q h_u || W_K h_v])`` for every pair."""
    attn_dim = params.w_query.shape[0]
    query = H @ params.w_query.T
    key = H @ params.w_key.T
    from_source = query @ params.attn_vec[:attn_dim]
    to_target = key @ params.attn_vec[attn_dim:]
    raw = from_source[..., :, None] + to_target[..., None, :]
    return F.leaky_relu(raw, negative_slope=settings.LEAKY_RELU_SLOPE)


def structural_weight_matrix(H: torch.Tensor, params: ModelParameters) -> torch.Tensor:
    """
    Structural weights from embeddings ``H`` (..., K, 2d).

    Attention is normalized over sources ``u`` for each target ``v``; the
    context vectors ``h~_v = sum_u eta[u, v] h_u`` are projected through
    ``W_proj`` and stacked so that row ``v`` equals ``W_proj h~_v``.

    Raises:
        NumericOverflowError: if the attention scores are not finite.
    """
    scores = attention_scores(H, params)
    if not torch.isfinite(scores).all():
        raise NumericOverflowError("Attention scores are not finite")
    eta = torch.softmax(scores, dim=-2)
    context = eta.transpose(-1, -2) @ H
    return context @ params.w_proj.T


def structural_weights(
    H: torch.Tensor, params: ModelParameters, t: float = float("nan")
) -> StructuralWeights:
    """Wrap :func:`structural_weight_matrix` for a single query time."""
    return StructuralWeights(t=t, W=structural_weight_matrix(H, params))


def static_weight_matrix(params: ModelParameters) -> torch.Tensor:
    """Time-invariant weights computed from the type embeddings alone."""
    return structural_weight_matrix(params.type_embed, params)


def edge_activation(w, beta: float):
    """Edge activation ``1 - exp(-beta |w|)`` for tensors, arrays or scalars."""
    if isinstance(w, torch.Tensor):
        return -torch.expm1(-beta * w.abs())
    value = -np.expm1(-beta * np.abs(w))
    return float(value) if np.ndim(value) == 0 else value


class _TraceExpPenalty(torch.autograd.Function):
    """``Tr(exp(W o W)) - K`` by a truncated Taylor series, batched over leading dims."""

    @staticmethod
    def forward(ctx, W: torch.Tensor) -> torch.Tensor:  # type: ignore[override]
        k = W.shape[-1]
        M = W * W
        identity = torch.eye(k, dtype=W.dtype).expand_as(M)
        term = identity.clone()
        expm = identity.clone()
        for j in range(1, 2 * k + 21):
            term = term @ M / j
            expm = expm + term
            trace_term = torch.diagonal(term, dim1=-2, dim2=-1).sum(-1)
            if not torch.isfinite(expm).all():
                raise NumericOverflowError(
                    f"Matrix exponential series diverged at term {j}"
                )
            # series has converged once both the trace and the matrix term are negligible
            if (
                trace_term.abs().max() < settings.TRACE_SERIES_TOLERANCE
                and term.abs().max() < settings.TRACE_SERIES_TOLERANCE
            ):
                break
        else:
            message = f"Matrix exponential series truncated after {2 * k + 20} terms"
            logger.warning(message)
            warnings.warn(message, TruncatedSeriesWarning, stacklevel=2)
        ctx.save_for_backward(W, expm)
        return torch.diagonal(expm, dim1=-2, dim2=-1).sum(-1) - k

    @staticmethod
    def backward(ctx, grad_output: torch.Tensor) -> torch.Tensor:  # type: ignore[override]
        W, expm = ctx.saved_tensors
        return grad_output[..., None, None] * 2.0 * expm.transpose(-1, -2) * W


def acyclicity_value(W: "StructuralWeights | torch.Tensor") -> torch.Tensor:
    """Acyclicity penalty ``h(W)``, zero exactly when the support of ``W`` is a DAG."""
    matrix = W.W if isinstance(W, StructuralWeights) else torch.as_tensor(W, dtype=DTYPE)
    if matrix.numel() == 0:
        return matrix.sum(dim=(-2, -1))
    return _TraceExpPenalty.apply(matrix)


def sparsity_value(W: "StructuralWeights | torch.Tensor") -> torch.Tensor:
    """Elementwise L1 norm of ``W`` over its last two dimensions."""
    matrix = W.W if isinstance(W, StructuralWeights) else torch.as_tensor(W, dtype=DTYPE)
    return matrix.abs().sum(dim=(-2, -1))
