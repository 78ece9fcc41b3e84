"""
Pytest configuration and fixtures for MOCHA tests.

Models are kept small (K=3, tiny embeddings) so the whole suite runs on CPU
in seconds.
"""

import dataclasses
import tempfile
from collections.abc import Generator
from pathlib import Path

import pytest
import torch
from mocha_causal.core.events import EventSequence
from mocha_causal.core.hyperparameters import HyperParameters, ModelVariant
from mocha_causal.core.model import MochaModel
from mocha_causal.core.parameters import ModelParameters, init_parameters, inverse_softplus
from mocha_causal.services.simulation_service import (
    PlantedGenerator,
    default_planted_generator,
    simulate_corpus,
)


@pytest.fixture
def temp_dir() -> Generator[Path, None, None]:
    """Provide a temporary directory for tests."""
    with tempfile.TemporaryDirectory() as tmpdir:
        yield Path(tmpdir)


@pytest.fixture
def small_hp() -> HyperParameters:
    """Small dynamic model over three types."""
    return HyperParameters(
        num_types=3,
        half_dim=2,
        attn_dim=3,
        hidden_dim=4,
        max_order=2,
        integration_substeps=4,
        variant=ModelVariant.FULL_DYNAMIC,
    )


@pytest.fixture
def small_params(small_hp: HyperParameters) -> ModelParameters:
    """Deterministically initialized parameters for ``small_hp``."""
    return init_parameters(small_hp, seed=3)


@pytest.fixture
def small_model(small_params: ModelParameters, small_hp: HyperParameters) -> MochaModel:
    return MochaModel(small_params, small_hp)


@pytest.fixture
def bounded_model(small_params: ModelParameters, small_hp: HyperParameters) -> MochaModel:
    """``small_model`` with unit base rates, a four-event history window and fine quadrature."""
    hp = small_hp.replace(max_history=4, integration_substeps=40)
    mu_raw = torch.full_like(small_params.mu_raw, inverse_softplus(1.0))
    return MochaModel(dataclasses.replace(small_params, mu_raw=mu_raw), hp)


@pytest.fixture
def toy_sequence() -> EventSequence:
    """Five events of three types on [0, 4]."""
    return EventSequence.from_arrays(
        [0.3, 0.9, 1.4, 2.2, 3.1], [0, 1, 0, 2, 1], horizon=4.0, seq_id="toy"
    )


@pytest.fixture
def toy_corpus(toy_sequence: EventSequence) -> list[EventSequence]:
    """Three short sequences including ``toy_sequence``."""
    return [
        toy_sequence,
        EventSequence.from_arrays([0.5, 1.5, 2.5], [2, 0, 1], horizon=3.0, seq_id="b"),
        EventSequence.from_arrays([0.2, 0.4, 1.9, 2.0], [1, 1, 0, 2], horizon=2.5, seq_id="c"),
    ]


@pytest.fixture
def planted() -> PlantedGenerator:
    """The built-in five-type planted generator."""
    return default_planted_generator()


@pytest.fixture
def planted_corpus(planted: PlantedGenerator) -> list[EventSequence]:
    """Twenty short sequences from the planted generator."""
    return simulate_corpus(planted, 20, horizon=10.0, seed=11)
