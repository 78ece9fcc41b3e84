"""Model hyper-parameters and the variant ladder."""

import dataclasses
import math
from dataclasses import dataclass
from enum import Enum
from typing import Any

from ..config import settings
from ..utils.errors import HyperParameterError


class ModelVariant(Enum):
    """Model variants, from plain Hawkes up to the full dynamic multi-order model."""

    HAWKES_UNI = "hawkes_uni"  # self-excitation only, first order, static weights
    HAWKES_MULTI = "hawkes_multi"  # mutual excitation, first order, static weights
    MULTI_ORDER_STATIC = "multi_order_static"  # multi-order chains, static weights
    FULL_DYNAMIC = "full_dynamic"  # multi-order chains, time-varying weights

    @classmethod
    def parse(cls, value: "str | ModelVariant") -> "ModelVariant":
        """Accept enum members, values or names in any case, with - or _."""
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("-", "_")
        for member in cls:
            if key in (member.value, member.name.lower()):
                return member
        choices = ", ".join(m.value for m in cls)
        raise HyperParameterError(f"Unknown model variant '{value}' (choose from {choices})")


@dataclass(frozen=True)
class HyperParameters:
    """
    Structural and regularization settings of a model.

    ``max_order`` defaults to ``min(3, num_types - 1)``. ``time_scale`` is the
    factor applied to raw corpus timestamps before they reach the model.
    """

    num_types: int
    half_dim: int = settings.EMBED_HALF_DIM
    attn_dim: int = settings.ATTENTION_DIM
    hidden_dim: int = settings.DECAY_HIDDEN_DIM
    max_order: int | None = None
    beta: float = settings.EDGE_BETA
    theta: float = settings.EDGE_THRESHOLD
    gamma_acyclic: float = settings.GAMMA_ACYCLIC
    gamma_sparse: float = settings.GAMMA_SPARSE
    integration_substeps: int = settings.INTEGRATION_SUBSTEPS
    epsilon: float = settings.EPSILON
    variant: ModelVariant = ModelVariant.FULL_DYNAMIC
    max_history: int | None = None
    time_scale: float = 1.0
    excitation_enabled: bool = True
    freeze_weights_between_events: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "variant", ModelVariant.parse(self.variant))
        if self.num_types < 2:
            raise HyperParameterError(
                f"At least two event types are required, got K={self.num_types}"
            )
        if self.max_order is None:
            object.__setattr__(
                self, "max_order", min(settings.MAX_ORDER_CAP, self.num_types - 1)
            )
        self._validate()

    def _validate(self) -> None:
        checks: list[tuple[bool, str]] = [
            (self.half_dim >= 1, f"half_dim must be >= 1, got {self.half_dim}"),
            (self.attn_dim >= 1, f"attn_dim must be >= 1, got {self.attn_dim}"),
            (self.hidden_dim >= 1, f"hidden_dim must be >= 1, got {self.hidden_dim}"),
            (
                1 <= self.order <= self.num_types - 1,
                f"max_order must lie in [1, {self.num_types - 1}], got {self.max_order}",
            ),
            (self.beta > 0, f"beta must be positive, got {self.beta}"),
            (self.theta >= 0, f"theta must be non-negative, got {self.theta}"),
            (
                self.gamma_acyclic >= 0,
                f"gamma_acyclic must be non-negative, got {self.gamma_acyclic}",
            ),
            (
                self.gamma_sparse >= 0,
                f"gamma_sparse must be non-negative, got {self.gamma_sparse}",
            ),
            (
                self.integration_substeps >= 1,
                f"integration_substeps must be >= 1, got {self.integration_substeps}",
            ),
            (self.epsilon > 0, f"epsilon must be positive, got {self.epsilon}"),
            (
                self.max_history is None or self.max_history >= 1,
                f"max_history must be >= 1 when set, got {self.max_history}",
            ),
            (
                math.isfinite(self.time_scale) and self.time_scale > 0,
                f"time_scale must be positive, got {self.time_scale}",
            ),
        ]
        for ok, message in checks:
            if not ok:
                raise HyperParameterError(message)

    @property
    def order(self) -> int:
        """Declared maximum causal order ``L``."""
        assert self.max_order is not None
        return self.max_order

    @property
    def effective_order(self) -> int:
        """Number of orders the variant actually evaluates."""
        if self.variant in (ModelVariant.HAWKES_UNI, ModelVariant.HAWKES_MULTI):
            return 1
        return self.order

    @property
    def is_dynamic(self) -> bool:
        return self.variant is ModelVariant.FULL_DYNAMIC

    @property
    def embed_dim(self) -> int:
        return 2 * self.half_dim

    def replace(self, **changes: Any) -> "HyperParameters":
        """Return a copy with some fields changed."""
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict[str, Any]:
        data = dataclasses.asdict(self)
        data["variant"] = self.variant.value
        return data

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "HyperParameters":
        """Build hyper-parameters from a mapping of field names, ignoring ``None`` values."""
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise HyperParameterError(
                f"Unknown hyper-parameter(s): {', '.join(sorted(unknown))}"
            )
        if "num_types" not in data or data["num_types"] is None:
            raise HyperParameterError("num_types is required")
        values = {
            key: value
            for key, value in data.items()
            if value is not None or key in ("max_order", "max_history")
        }
        try:
            return cls(**values)
        except TypeError as e:
            raise HyperParameterError(f"Invalid hyper-parameters: {e}") from e
