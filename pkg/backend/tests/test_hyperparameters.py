"""Tests for hyper-parameter validation and serialization."""

import pytest
from mocha_causal.core.hyperparameters import HyperParameters, ModelVariant
from mocha_causal.utils.errors import HyperParameterError


def test_max_order_defaults_to_min_three_and_k_minus_one():
    """Test the default maximum order."""
    assert HyperParameters(num_types=2).order == 1
    assert HyperParameters(num_types=3).order == 2
    assert HyperParameters(num_types=10).order == 3


@pytest.mark.parametrize(
    "changes",
    [
        {"num_types": 1},
        {"num_types": 3, "max_order": 3},
        {"num_types": 3, "max_order": 0},
        {"num_types": 3, "beta": 0.0},
        {"num_types": 3, "theta": -0.1},
        {"num_types": 3, "integration_substeps": 0},
        {"num_types": 3, "epsilon": 0.0},
        {"num_types": 3, "gamma_sparse": -1.0},
        {"num_types": 3, "time_scale": 0.0},
    ],
)
def test_invalid_values_rejected(changes):
    """Test that out-of-domain values raise HyperParameterError."""
    with pytest.raises(HyperParameterError):
        HyperParameters(**changes)


def test_variant_parsing_accepts_names_and_values():
    """Test variant parsing from CLI-style strings."""
    assert ModelVariant.parse("hawkes-uni") is ModelVariant.HAWKES_UNI
    assert ModelVariant.parse("FULL_DYNAMIC") is ModelVariant.FULL_DYNAMIC
    assert HyperParameters(num_types=3, variant="multi_order_static").variant is (
        ModelVariant.MULTI_ORDER_STATIC
    )
    with pytest.raises(HyperParameterError):
        ModelVariant.parse("transformer")


def test_hawkes_variants_use_first_order_only():
    """Test the effective order of each variant."""
    hp = HyperParameters(num_types=4, max_order=3)
    assert hp.effective_order == 3
    assert hp.replace(variant=ModelVariant.HAWKES_MULTI).effective_order == 1
    assert hp.replace(variant=ModelVariant.HAWKES_UNI).effective_order == 1
    assert hp.is_dynamic
    assert not hp.replace(variant=ModelVariant.MULTI_ORDER_STATIC).is_dynamic


def test_dict_round_trip_and_unknown_keys(small_hp: HyperParameters):
    """Test to_dict/from_dict and rejection of unknown keys."""
    data = small_hp.to_dict()
    assert data["variant"] == "full_dynamic"
    assert HyperParameters.from_dict(data) == small_hp
    with pytest.raises(HyperParameterError, match="learning_rate"):
        HyperParameters.from_dict({**data, "learning_rate": 0.1})
    with pytest.raises(HyperParameterError):
        HyperParameters.from_dict({"beta": 1.0})
