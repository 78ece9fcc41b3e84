"""Tests for the learnable decay kernel."""

import numpy as np
import torch
from mocha_causal.core.decay import decay, kernel_profile
from mocha_causal.core.parameters import ModelParameters


def test_decay_is_zero_for_non_positive_gaps(small_params: ModelParameters):
    """Test the clamp at dt <= 0."""
    assert float(decay(0.0, small_params)) == 0.0
    assert float(decay(-1.5, small_params)) == 0.0


def test_decay_right_limit_at_zero(small_params: ModelParameters):
    """Test that an inclusive zero gap takes the sigmoid branch."""
    value = float(decay(torch.tensor(0.0, dtype=torch.float64), small_params, torch.tensor(True)))
    assert 0.0 < value < 1.0


def test_decay_lies_in_unit_interval(small_params: ModelParameters):
    """Test the sigmoid range on positive gaps."""
    values = decay(np.linspace(0.01, 50.0, 200), small_params)
    assert values.shape == (200,)
    assert bool(((values > 0) & (values < 1)).all())


def test_decay_gradient_matches_finite_differences(small_params: ModelParameters):
    """Test gradients with respect to the MLP parameters at positive gaps."""
    dt = torch.tensor([0.3, 1.7, 4.2], dtype=torch.float64)

    def kernel(fc1_weight, fc1_bias, fc2_weight, fc2_bias):
        params = ModelParameters.from_tensors(
            {
                **small_params.tensors(),
                "fc1_weight": fc1_weight,
                "fc1_bias": fc1_bias,
                "fc2_weight": fc2_weight,
                "fc2_bias": fc2_bias,
            }
        )
        return decay(dt, params)

    inputs = tuple(
        getattr(small_params, name).detach().clone().requires_grad_()
        for name in ("fc1_weight", "fc1_bias", "fc2_weight", "fc2_bias")
    )
    assert torch.autograd.gradcheck(kernel, inputs, eps=1e-6, atol=1e-8, rtol=1e-5)


def test_kernel_profile_returns_numpy(small_params: ModelParameters):
    """Test the detached kernel profile."""
    grid = np.array([0.5, 1.0, 2.0])
    profile = kernel_profile(small_params, grid)
    assert isinstance(profile, np.ndarray)
    np.testing.assert_allclose(profile, decay(grid, small_params).detach().numpy())
