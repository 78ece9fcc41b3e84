"""
Tests for event sequences.

Tests construction, validation errors and history prefixes.
"""

import numpy as np
import pytest
from mocha_causal.core.events import (
    Event,
    EventSequence,
    corpus_mean_gap,
    validate_corpus,
    validate_sequence,
)
from mocha_causal.utils.errors import (
    EmptySequenceError,
    HorizonViolationError,
    NonMonotonicTimeError,
    TypeOutOfRangeError,
)


def test_from_arrays_exposes_read_only_arrays(toy_sequence: EventSequence):
    """Test that times and types mirror the events and cannot be mutated."""
    assert len(toy_sequence) == 5
    assert toy_sequence.events[0] == Event(0.3, 0)
    np.testing.assert_allclose(toy_sequence.times, [0.3, 0.9, 1.4, 2.2, 3.1])
    assert toy_sequence.types.tolist() == [0, 1, 0, 2, 1]
    with pytest.raises(ValueError):
        toy_sequence.times[0] = 1.0


def test_valid_sequence_passes(toy_sequence: EventSequence):
    """Test that a well-formed sequence validates."""
    validate_sequence(toy_sequence, num_types=3)


def test_equal_timestamps_rejected():
    """Test that simultaneous events break strict monotonicity."""
    seq = EventSequence.from_arrays([0.5, 0.5], [0, 1], horizon=1.0)
    with pytest.raises(NonMonotonicTimeError):
        validate_sequence(seq, 2)


def test_type_out_of_range_rejected():
    """Test that a type index must be below K."""
    seq = EventSequence.from_arrays([0.5, 0.7], [0, 3], horizon=1.0, seq_id="bad")
    with pytest.raises(TypeOutOfRangeError, match="bad"):
        validate_sequence(seq, 3)


def test_event_beyond_horizon_rejected():
    """Test that events must lie inside [0, T]."""
    seq = EventSequence.from_arrays([0.5, 1.5], [0, 1], horizon=1.0)
    with pytest.raises(HorizonViolationError):
        validate_sequence(seq, 2)


def test_non_positive_horizon_rejected():
    """Test that the window must have positive length."""
    with pytest.raises(HorizonViolationError):
        validate_sequence(EventSequence((), 0.0, allow_empty=True), 2)


def test_empty_sequence_needs_flag():
    """Test that an empty sequence is only valid when flagged."""
    with pytest.raises(EmptySequenceError):
        validate_sequence(EventSequence((), 1.0), 2)
    validate_sequence(EventSequence((), 1.0, allow_empty=True), 2)


def test_event_at_horizon_is_allowed():
    """Test that an event exactly at T is inside the window."""
    validate_sequence(EventSequence.from_arrays([0.0, 1.0], [0, 1], horizon=1.0), 2)


def test_prefix_before_strict_and_inclusive(toy_sequence: EventSequence):
    """Test that the history at an event time excludes it unless inclusive."""
    assert len(toy_sequence.prefix_before(1.4)) == 2
    assert len(toy_sequence.prefix_before(1.4, inclusive=True)) == 3
    assert len(toy_sequence.prefix_before(0.0)) == 0
    prefix = toy_sequence.prefix_before(10.0)
    assert prefix.events == toy_sequence.events
    assert prefix.allow_empty


def test_rescaled_scales_times_and_horizon(toy_sequence: EventSequence):
    """Test timestamp rescaling."""
    scaled = toy_sequence.rescaled(2.0)
    np.testing.assert_allclose(scaled.times, 2.0 * toy_sequence.times)
    assert scaled.horizon == 8.0
    assert scaled.types.tolist() == toy_sequence.types.tolist()


def test_corpus_mean_gap(toy_corpus):
    """Test the pooled mean inter-event gap."""
    expected = (3.1 + 2.5 + 2.0) / 12
    assert corpus_mean_gap(toy_corpus) == pytest.approx(expected)
    validate_corpus(toy_corpus, 3)
