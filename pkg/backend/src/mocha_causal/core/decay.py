"""Learnable scalar decay kernel shared by all type pairs."""

import logging

import numpy as np
import torch

from .encoding import positional_encoding
from .parameters import DTYPE, ModelParameters

logger = logging.getLogger(__name__)


def decay(
    dt: float | np.ndarray | torch.Tensor,
    params: ModelParameters,
    inclusive: torch.Tensor | None = None,
) -> torch.Tensor:
    """
    Decay ``kappa(dt) = sigmoid(W2 relu(W1 PE(dt) + b1) + b2)`` elementwise.

    Returns exactly 0 where ``dt <= 0``. Where ``inclusive`` is set, ``dt == 0``
    takes the sigmoid branch instead; this is the right limit at an event time.
    """
    dt = torch.as_tensor(dt, dtype=DTYPE)
    active = dt > 0
    if inclusive is not None:
        active = active | ((dt == 0) & inclusive)
    half_dim = params.fc1_weight.shape[1] // 2
    hidden = torch.relu(positional_encoding(dt, half_dim) @ params.fc1_weight.T + params.fc1_bias)
    value = torch.sigmoid(hidden @ params.fc2_weight.T + params.fc2_bias).squeeze(-1)
    return torch.where(active, value, torch.zeros_like(value))


def kernel_profile(params: ModelParameters, grid: np.ndarray) -> np.ndarray:
    """Kernel values on a grid of gaps, detached to numpy."""
    with torch.no_grad():
        values = decay(np.asarray(grid, dtype=np.float64), params).numpy()
    if len(values):
        logger.debug(f"Decay kernel tail kappa({float(grid[-1]):.4g}) = {values[-1]:.4g}")
    return values
