"""
Tests for simulation and goodness of fit.

Tests planted generators, thinning from a trained model and time rescaling.
"""

import dataclasses
from pathlib import Path

import numpy as np
import pytest
import torch
from mocha_causal.core.events import EventSequence, validate_sequence
from mocha_causal.core.likelihood import compensator_increments
from mocha_causal.core.model import MochaModel, QueryPoints
from mocha_causal.core.parameters import inverse_softplus
from mocha_causal.services.simulation_service import (
    PlantedGenerator,
    ThinningSampler,
    chain_planted_generator,
    goodness_of_fit,
    random_toy_corpus,
    read_generator,
    simulate,
    simulate_corpus,
    time_rescaling_residuals,
    write_generator,
)
from mocha_causal.utils.errors import HorizonViolationError, PathSpecificationError
from scipy.integrate import trapezoid


def test_planted_generator_rejects_cycles():
    """Test that a cyclic edge set is refused."""
    with pytest.raises(PathSpecificationError):
        PlantedGenerator(3, {(0, 1): 0.5, (1, 0): 0.5}, 1.0, (0.1, 0.1, 0.1))


@pytest.mark.parametrize(
    "kwargs",
    [
        {"edges": {(0, 3): 0.5}},
        {"edges": {(0, 1): -0.5}},
        {"mu": (0.1, 0.1)},
        {"decay_rate": 0.0},
        {"paths": ((0,),)},
    ],
)
def test_planted_generator_validation(kwargs):
    """Test out-of-range indices, rates and paths."""
    base = {"num_types": 3, "edges": {(0, 1): 0.5}, "decay_rate": 1.0, "mu": (0.1, 0.1, 0.1)}
    with pytest.raises(PathSpecificationError):
        PlantedGenerator(**{**base, **kwargs})


def test_planted_generator_dict_round_trip(planted: PlantedGenerator):
    """Test serialization, including a scalar base rate."""
    assert PlantedGenerator.from_dict(planted.to_dict()) == planted
    data = {"num_types": 3, "edges": [[0, 1, 0.4]], "decay_rate": 2.0, "mu": 0.2}
    assert PlantedGenerator.from_dict(data).mu == (0.2, 0.2, 0.2)
    with pytest.raises(PathSpecificationError):
        PlantedGenerator.from_dict({"num_types": 3})


def test_planted_adjacency(planted: PlantedGenerator):
    """Test the ground-truth adjacency of the default generator."""
    A = planted.adjacency()
    assert A.sum() == 4
    assert A[0, 1] == A[1, 2] == A[0, 3] == A[3, 4] == 1
    chain = chain_planted_generator(4)
    assert chain.paths == ((0, 1, 2, 3),)


def test_planted_simulation_is_seeded(planted: PlantedGenerator):
    """Test reproducibility and validity of simulated sequences."""
    a = simulate(planted, 20.0, seed=3, seq_id="x")
    b = simulate(planted, 20.0, seed=3, seq_id="x")
    assert a == b
    assert a.seq_id == "x"
    validate_sequence(a, planted.num_types)
    assert simulate(planted, 20.0, seed=4) != a


def test_simulate_corpus_independent_of_workers(planted: PlantedGenerator):
    """Test that threading does not change the result."""
    serial = simulate_corpus(planted, 6, 10.0, seed=2)
    threaded = simulate_corpus(planted, 6, 10.0, seed=2, max_workers=3)
    assert serial == threaded
    assert [s.seq_id for s in serial] == [f"seq-{i:05d}" for i in range(6)]


def test_max_events_cap(planted: PlantedGenerator):
    """Test that simulation stops at the event cap."""
    seq = simulate(planted, 1000.0, seed=0, max_events=5)
    assert len(seq) == 5


def test_planted_compensator_matches_quadrature(planted: PlantedGenerator):
    """Test the closed-form compensator against dense numerical integration."""
    seq = simulate(planted, 15.0, seed=8)
    knots = np.concatenate([[0.0], seq.times, [seq.horizon]])
    increments = planted.compensator_increments(seq)
    for i in range(len(knots) - 1):
        if knots[i + 1] <= knots[i]:
            continue
        grid = np.linspace(knots[i], knots[i + 1], 2001)
        rate = [planted.intensity(seq, t).sum() for t in grid]
        assert trapezoid(rate, grid) == pytest.approx(increments[i], rel=1e-3)


def test_planted_residuals_are_unit_exponential(planted: PlantedGenerator, planted_corpus):
    """Test time rescaling against the generating process."""
    residuals = np.concatenate([time_rescaling_residuals(s, planted) for s in planted_corpus])
    assert len(residuals) > 50
    assert not goodness_of_fit(residuals).rejects(0.001)


def test_goodness_of_fit_rejects_wrong_distribution():
    """Test that clearly non-exponential residuals are rejected."""
    rng = np.random.default_rng(0)
    assert not goodness_of_fit(rng.exponential(size=500)).rejects(0.001)
    assert goodness_of_fit(rng.uniform(0, 0.2, size=500)).rejects(0.01)


def test_thinning_from_model(small_model: MochaModel):
    """Test that thinning yields valid, reproducible sequences."""
    sampler = ThinningSampler(small_model)
    seq = sampler.sample(8.0, seed=5, seq_id="m")
    validate_sequence(seq, 3)
    assert sampler.refreshes >= 1
    assert simulate(small_model, 8.0, seed=5, seq_id="m") == seq


def test_thinning_bound_dominates_intensity(small_model: MochaModel, toy_sequence: EventSequence):
    """Test that the bound exceeds the intensity across its window."""
    sampler = ThinningSampler(small_model)
    history = toy_sequence.prefix_before(3.1, inclusive=True)
    bound = sampler.bound(history, 3.1)
    probes = QueryPoints.exclusive(np.linspace(3.11, bound.valid_until, 50))
    rates = small_model.total_rate(history, probes)
    assert np.all(rates <= bound.value)


def test_model_residuals_are_unit_exponential(small_model: MochaModel):
    """Test time rescaling of sequences simulated from the model itself."""
    corpus = simulate_corpus(small_model, 4, 15.0, seed=21)
    residuals = np.concatenate([time_rescaling_residuals(s, small_model) for s in corpus])
    assert len(residuals) > 50
    assert not goodness_of_fit(residuals).rejects(0.001)


def test_random_toy_corpus_sizes():
    """Test the gradient-check corpus helper."""
    corpus = random_toy_corpus(3, 5, 6, seed=0)
    assert len(corpus) == 5
    assert all(2 <= len(s) <= 6 for s in corpus)
    for seq in corpus:
        validate_sequence(seq, 3)


def test_simulate_rejects_non_positive_horizon(planted: PlantedGenerator):
    """Test that an empty observation window is refused with a typed error."""
    with pytest.raises(HorizonViolationError):
        simulate(planted, 0.0, seed=0)


def test_thinning_continues_after_a_low_first_window(mocker, small_model: MochaModel):
    """Test that a proposal beyond a low window refreshes instead of ending the sequence."""
    sampler = ThinningSampler(small_model)
    real_bound = sampler.bound

    def low_first_window(seq, t):
        bound = real_bound(seq, t)
        if t == 0.0:
            return dataclasses.replace(bound, value=1e-9, valid_until=0.5)
        return bound

    mocker.patch.object(sampler, "bound", side_effect=low_first_window)
    seq = sampler.sample(40.0, seed=1)
    assert len(seq) > 0
    assert seq.times[0] > 0.5


@pytest.mark.slow
def test_thinning_event_count_matches_compensator(bounded_model: MochaModel):
    """Test E[N(T)] = E[Lambda(T)] with frequent bound refreshes."""
    corpus = simulate_corpus(bounded_model, 300, 3.0, seed=8, staleness_horizon=0.2)
    gaps = np.array(
        [
            len(seq) - compensator_increments(seq, bounded_model.params, bounded_model.hp).sum()
            for seq in corpus
        ]
    )
    standard_error = gaps.std(ddof=1) / np.sqrt(len(gaps))
    assert abs(gaps.mean()) < 4 * standard_error + 0.05


@pytest.mark.slow
def test_residual_ks_pass_rate_and_misspecified_base_rates(bounded_model: MochaModel):
    """Test KS acceptance of the true model and rejection of a five-fold base rate."""
    mu_raw = torch.full_like(bounded_model.params.mu_raw, inverse_softplus(5.0))
    inflated = MochaModel(
        dataclasses.replace(bounded_model.params, mu_raw=mu_raw), bounded_model.hp
    )
    passes = rejections = 0
    runs = 50
    for run in range(runs):
        corpus = simulate_corpus(bounded_model, 8, 5.0, seed=100 + run)
        true_fit = goodness_of_fit(
            np.concatenate([time_rescaling_residuals(s, bounded_model) for s in corpus])
        )
        wrong_fit = goodness_of_fit(
            np.concatenate([time_rescaling_residuals(s, inflated) for s in corpus])
        )
        passes += not true_fit.rejects(0.01)
        rejections += wrong_fit.rejects(0.01)
    assert passes >= 0.9 * runs
    assert rejections >= 0.9 * runs


def test_generator_round_trip(temp_dir: Path, planted: PlantedGenerator):
    """Test the YAML generator description."""
    path = temp_dir / "generator.yaml"
    write_generator(path, planted)
    assert read_generator(path) == planted
    path.write_text("- just\n- a list\n", encoding="utf-8")
    with pytest.raises(PathSpecificationError):
        read_generator(path)
