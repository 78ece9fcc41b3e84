"""Learnable model parameters and their initialization."""

import logging
import math
from dataclasses import dataclass, fields

import torch

from ..config import settings
from ..utils.errors import HyperParameterError, NumericOverflowError
from .hyperparameters import HyperParameters

logger = logging.getLogger(__name__)

DTYPE = torch.float64

TENSOR_NAMES: tuple[str, ...] = (
    "mu_raw",
    "alpha_raw",
    "type_embed",
    "w_query",
    "w_key",
    "attn_vec",
    "w_proj",
    "fc1_weight",
    "fc1_bias",
    "fc2_weight",
    "fc2_bias",
)


@dataclass(frozen=True)
class ModelParameters:
    """
    Every learnable tensor of the model, stored as float64.

    Attributes:
        mu_raw: (K,) pre-activations of the base intensities.
        alpha_raw: (K, L) pre-activations of the per-order weights.
        type_embed: (K, 2d) type embeddings.
        w_query: (d_attn, 2d) attention query projection.
        w_key: (d_attn, 2d) attention key projection.
        attn_vec: (2 d_attn,) attention vector.
        w_proj: (K, 2d) projection of context vectors onto target types.
        fc1_weight, fc1_bias: (h, 2d) and (h,) first decay layer.
        fc2_weight, fc2_bias: (1, h) and (1,) second decay layer.
    """

    mu_raw: torch.Tensor
    alpha_raw: torch.Tensor
    type_embed: torch.Tensor
    w_query: torch.Tensor
    w_key: torch.Tensor
    attn_vec: torch.Tensor
    w_proj: torch.Tensor
    fc1_weight: torch.Tensor
    fc1_bias: torch.Tensor
    fc2_weight: torch.Tensor
    fc2_bias: torch.Tensor

    def tensors(self) -> dict[str, torch.Tensor]:
        """Named tensors in canonical order."""
        return {name: getattr(self, name) for name in TENSOR_NAMES}

    @classmethod
    def from_tensors(cls, tensors: dict[str, torch.Tensor]) -> "ModelParameters":
        missing = set(TENSOR_NAMES) - set(tensors)
        if missing:
            raise HyperParameterError(f"Missing parameter tensors: {sorted(missing)}")
        return cls(**{name: tensors[name] for name in TENSOR_NAMES})

    def map(self, fn) -> "ModelParameters":
        """Apply ``fn`` to every tensor."""
        return ModelParameters(**{f.name: fn(getattr(self, f.name)) for f in fields(self)})

    def detach(self) -> "ModelParameters":
        return self.map(lambda t: t.detach().clone())

    def with_grad(self) -> "ModelParameters":
        """Leaf copies that record gradients."""
        return self.map(lambda t: t.detach().clone().requires_grad_(True))

    def num_entries(self) -> int:
        return sum(t.numel() for t in self.tensors().values())

    def is_finite(self) -> bool:
        return all(bool(torch.isfinite(t).all()) for t in self.tensors().values())

    @property
    def base_rates(self) -> torch.Tensor:
        """Base intensities mu_k, strictly positive."""
        return torch.nn.functional.softplus(self.mu_raw)

    @property
    def order_weights(self) -> torch.Tensor:
        """Order weights alpha_k^(l), strictly positive, shape (K, L)."""
        return torch.nn.functional.softplus(self.alpha_raw)


def expected_shapes(hp: HyperParameters) -> dict[str, tuple[int, ...]]:
    """Shape contract of every tensor for the given hyper-parameters."""
    k, e, a, h = hp.num_types, hp.embed_dim, hp.attn_dim, hp.hidden_dim
    return {
        "mu_raw": (k,),
        "alpha_raw": (k, hp.order),
        "type_embed": (k, e),
        "w_query": (a, e),
        "w_key": (a, e),
        "attn_vec": (2 * a,),
        "w_proj": (k, e),
        "fc1_weight": (h, e),
        "fc1_bias": (h,),
        "fc2_weight": (1, h),
        "fc2_bias": (1,),
    }


def _fan_in(hp: HyperParameters) -> dict[str, int]:
    e = hp.embed_dim
    return {
        "alpha_raw": hp.order,
        "type_embed": e,
        "w_query": e,
        "w_key": e,
        "attn_vec": 2 * hp.attn_dim,
        "w_proj": e,
        "fc1_weight": e,
        "fc1_bias": e,
        "fc2_weight": hp.hidden_dim,
        "fc2_bias": hp.hidden_dim,
    }


def validate_parameters(params: ModelParameters, hp: HyperParameters) -> None:
    """
    Check shapes against ``hp`` and that every entry is finite.

    Raises:
        HyperParameterError: if a tensor has the wrong shape.
        NumericOverflowError: if a tensor holds non-finite values.
    """
    for name, shape in expected_shapes(hp).items():
        tensor = getattr(params, name)
        if tuple(tensor.shape) != shape:
            raise HyperParameterError(
                f"Parameter {name} has shape {tuple(tensor.shape)}, expected {shape}"
            )
        if not torch.isfinite(tensor).all():
            raise NumericOverflowError(f"Parameter {name} holds non-finite values")


def inverse_softplus(value: float) -> float:
    """Raw value whose softplus equals ``value``."""
    return math.log(math.expm1(value))


def init_parameters(hp: HyperParameters, seed: int) -> ModelParameters:
    """
    Draw initial parameters deterministically from ``seed``.

    Matrices and vectors are standard normal scaled by ``1/sqrt(fan_in)``;
    ``mu_raw`` starts so that every base rate equals ``INITIAL_BASE_RATE``.
    """
    generator = torch.Generator().manual_seed(int(seed))
    fan_in = _fan_in(hp)
    tensors: dict[str, torch.Tensor] = {}
    for name, shape in expected_shapes(hp).items():
        if name == "mu_raw":
            tensors[name] = torch.full(
                shape, inverse_softplus(settings.INITIAL_BASE_RATE), dtype=DTYPE
            )
            continue
        scale = 1.0 / math.sqrt(fan_in[name])
        tensors[name] = torch.randn(shape, generator=generator, dtype=DTYPE) * scale
    logger.debug(
        f"Initialized parameters for K={hp.num_types}, L={hp.order}, seed={seed}"
    )
    return ModelParameters.from_tensors(tensors)
