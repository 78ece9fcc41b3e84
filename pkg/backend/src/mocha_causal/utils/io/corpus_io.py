"""
Corpus files.

A corpus is line-delimited JSON, one sequence per line::

    {"seq_id": "a", "T": 10.0, "events": [{"t": 0.5, "k": 1}, ...]}

Blank lines are skipped. An optional ``time_scale`` multiplies every
timestamp on read and divides it on write.
"""

import json
import logging
from collections.abc import Iterable, Sequence
from pathlib import Path
from typing import Any

from ...core.events import EventSequence, validate_sequence
from ..errors import CorpusFormatError, TypeCountMismatchError

logger = logging.getLogger(__name__)


def _parse_sequence(record: Any, time_scale: float) -> EventSequence:
    if not isinstance(record, dict):
        raise ValueError("record is not an object")
    events = record["events"]
    if not isinstance(events, list):
        raise ValueError("'events' is not a list")
    times = [float(e["t"]) * time_scale for e in events]
    types = [int(e["k"]) for e in events]
    return EventSequence.from_arrays(
        times,
        types,
        float(record["T"]) * time_scale,
        seq_id=str(record.get("seq_id", "")),
        allow_empty=bool(record.get("allow_empty", False)),
    )


def infer_num_types(corpus: Sequence[EventSequence]) -> int:
    """One more than the largest type index in ``corpus`` (at least 2)."""
    largest = max((int(seq.types.max()) for seq in corpus if len(seq)), default=1)
    return max(2, largest + 1)


def ensure_type_count(corpus: Sequence[EventSequence], num_types: int) -> None:
    """
    Raises:
        TypeCountMismatchError: if ``corpus`` uses a type index the model lacks.
    """
    largest = max((int(seq.types.max()) for seq in corpus if len(seq)), default=-1)
    if largest >= num_types:
        raise TypeCountMismatchError(num_types, largest)


def read_corpus(
    path: Path, num_types: int | None = None, time_scale: float = 1.0
) -> list[EventSequence]:
    """
    Read and validate a corpus file.

    Raises:
        CorpusFormatError: if a line is not a valid record.
        TypeCountMismatchError: if ``num_types`` is given and a type exceeds it.
        SequenceValidationError: if a sequence breaks an invariant.
    """
    corpus: list[EventSequence] = []
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as e:
        raise CorpusFormatError(str(path), 0, f"cannot read file: {e}") from e
    for line_number, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            seq = _parse_sequence(json.loads(line), time_scale)
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as e:
            raise CorpusFormatError(str(path), line_number, str(e)) from e
        if not seq.seq_id:
            seq = EventSequence(seq.events, seq.horizon, f"line-{line_number}", seq.allow_empty)
        corpus.append(seq)
    if not corpus:
        raise CorpusFormatError(str(path), 0, "corpus holds no sequences")

    if num_types is not None:
        ensure_type_count(corpus, num_types)
    check_types = num_types if num_types is not None else infer_num_types(corpus)
    for seq in corpus:
        validate_sequence(seq, check_types)
    logger.info(f"Read {len(corpus)} sequences from {path}")
    return corpus


def write_corpus(
    path: Path, corpus: Iterable[EventSequence], time_scale: float = 1.0
) -> None:
    """Write ``corpus`` as line-delimited JSON, undoing ``time_scale``."""
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = []
    for seq in corpus:
        record = {
            "seq_id": seq.seq_id,
            "T": seq.horizon / time_scale,
            "events": [{"t": e.t / time_scale, "k": e.k} for e in seq.events],
        }
        if not seq.events:
            record["allow_empty"] = True
        lines.append(json.dumps(record))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    logger.info(f"Wrote {len(lines)} sequences to {path}")
