"""Event and event-sequence types.

Sequences are immutable: every transformation (prefixing, rescaling) builds a
new value. Timestamps are kept in the units of the input file; a per-dataset
rescale factor can map them to roughly unit mean inter-event gap.
"""

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

import numpy as np

from ..utils.errors import (
    EmptySequenceError,
    HorizonViolationError,
    NonMonotonicTimeError,
    TypeOutOfRangeError,
)


@dataclass(frozen=True, slots=True)
class Event:
    """A single occurrence of event type ``k`` at time ``t``."""

    t: float
    k: int


@dataclass(frozen=True)
class EventSequence:
    """Ordered events observed on the window [0, horizon].

    Attributes:
        events: Events in strictly increasing time order.
        horizon: End of the observation window ``T``.
        seq_id: Identifier carried through corpus files and reports.
        allow_empty: Marks a sequence that is legitimately empty, such as a
            history prefix or a simulation that produced no events.
    """

    events: tuple[Event, ...]
    horizon: float
    seq_id: str = ""
    allow_empty: bool = False
    _times: np.ndarray = field(init=False, repr=False, compare=False)
    _types: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        events = tuple(self.events)
        object.__setattr__(self, "events", events)
        times = np.fromiter((e.t for e in events), dtype=np.float64, count=len(events))
        types = np.fromiter((e.k for e in events), dtype=np.int64, count=len(events))
        times.setflags(write=False)
        types.setflags(write=False)
        object.__setattr__(self, "_times", times)
        object.__setattr__(self, "_types", types)

    @classmethod
    def from_arrays(
        cls,
        times: Iterable[float],
        types: Iterable[int],
        horizon: float,
        seq_id: str = "",
        allow_empty: bool = False,
    ) -> "EventSequence":
        """Build a sequence from parallel time and type arrays."""
        events = tuple(
            Event(float(t), int(k)) for t, k in zip(times, types, strict=True)
        )
        return cls(events, float(horizon), seq_id=seq_id, allow_empty=allow_empty)

    @property
    def times(self) -> np.ndarray:
        return self._times

    @property
    def types(self) -> np.ndarray:
        return self._types

    def __len__(self) -> int:
        return len(self.events)

    def __iter__(self):
        return iter(self.events)

    def prefix_before(self, t: float, inclusive: bool = False) -> "EventSequence":
        """History of the process at ``t``: events strictly before it by default."""
        side = "right" if inclusive else "left"
        cut = int(np.searchsorted(self._times, t, side=side))
        return EventSequence(
            self.events[:cut], self.horizon, seq_id=self.seq_id, allow_empty=True
        )

    def rescaled(self, factor: float) -> "EventSequence":
        """Multiply every timestamp and the horizon by ``factor``."""
        return EventSequence(
            tuple(Event(e.t * factor, e.k) for e in self.events),
            self.horizon * factor,
            seq_id=self.seq_id,
            allow_empty=self.allow_empty,
        )

    def mean_gap(self) -> float:
        """Mean inter-event gap, counting the first gap from 0."""
        if not self.events:
            return self.horizon
        return float(self._times[-1]) / len(self.events)


def validate_sequence(seq: EventSequence, num_types: int) -> None:
    """
    Check every EventSequence invariant against a type count.

    Raises:
        HorizonViolationError: if the horizon is not positive or an event lies
            outside [0, T].
        NonMonotonicTimeError: if timestamps are not strictly increasing.
        TypeOutOfRangeError: if an event type is not in {0, ..., K-1}.
        EmptySequenceError: if the sequence is empty and not flagged as such.
    """
    if not (math.isfinite(seq.horizon) and seq.horizon > 0):
        raise HorizonViolationError(
            f"horizon must be a positive finite number, got {seq.horizon}", seq.seq_id
        )
    if not seq.events:
        if seq.allow_empty:
            return
        raise EmptySequenceError("sequence has no events", seq.seq_id)

    times, types = seq.times, seq.types
    if not np.all(np.isfinite(times)):
        raise HorizonViolationError("timestamps must be finite", seq.seq_id)
    if np.any(np.diff(times) <= 0):
        index = int(np.argmax(np.diff(times) <= 0)) + 1
        raise NonMonotonicTimeError(
            f"event {index} at t={times[index]} does not follow t={times[index - 1]}",
            seq.seq_id,
        )
    bad_types = (types < 0) | (types >= num_types)
    if np.any(bad_types):
        index = int(np.argmax(bad_types))
        raise TypeOutOfRangeError(
            f"event {index} has type {types[index]}, expected 0..{num_types - 1}",
            seq.seq_id,
        )
    if times[0] < 0 or times[-1] > seq.horizon:
        raise HorizonViolationError(
            f"events span [{times[0]}, {times[-1]}] outside [0, {seq.horizon}]",
            seq.seq_id,
        )


def validate_corpus(corpus: Sequence[EventSequence], num_types: int) -> None:
    """Validate every sequence of a corpus."""
    for seq in corpus:
        validate_sequence(seq, num_types)


def corpus_mean_gap(corpus: Sequence[EventSequence]) -> float:
    """Mean inter-event gap pooled over a corpus."""
    total_events = sum(len(seq) for seq in corpus)
    if total_events == 0:
        return float(np.mean([seq.horizon for seq in corpus])) if corpus else 1.0
    span = sum(float(seq.times[-1]) for seq in corpus if len(seq))
    return span / total_events
