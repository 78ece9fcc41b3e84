"""
Tests for corpus files.

Tests round trips and the error reported for each malformed input.
"""

import json
from pathlib import Path

import pytest
from mocha_causal.core.events import EventSequence
from mocha_causal.utils.errors import (
    CorpusFormatError,
    NonMonotonicTimeError,
    TypeCountMismatchError,
)
from mocha_causal.utils.io.corpus_io import (
    infer_num_types,
    read_corpus,
    write_corpus,
)


def _write_lines(path: Path, records) -> Path:
    path.write_text("\n".join(json.dumps(r) for r in records) + "\n", encoding="utf-8")
    return path


def test_corpus_round_trip(temp_dir: Path, toy_corpus):
    """Test writing and reading a corpus back."""
    path = temp_dir / "corpus.jsonl"
    write_corpus(path, toy_corpus)
    assert read_corpus(path) == toy_corpus
    assert infer_num_types(toy_corpus) == 3


def test_time_scale_applies_on_read(temp_dir: Path, toy_sequence: EventSequence):
    """Test that timestamps and horizon are multiplied by the scale."""
    path = temp_dir / "corpus.jsonl"
    write_corpus(path, [toy_sequence])
    (scaled,) = read_corpus(path, time_scale=2.0)
    assert scaled.horizon == 8.0
    assert scaled.times.tolist() == pytest.approx([0.6, 1.8, 2.8, 4.4, 6.2])


def test_missing_seq_id_uses_line_number(temp_dir: Path):
    """Test the fallback identifier."""
    path = _write_lines(
        temp_dir / "c.jsonl", [{"T": 1.0, "events": [{"t": 0.5, "k": 0}, {"t": 0.6, "k": 1}]}]
    )
    (seq,) = read_corpus(path)
    assert seq.seq_id == "line-1"


def test_empty_sequence_round_trip(temp_dir: Path):
    """Test that a flagged empty sequence survives a round trip."""
    path = temp_dir / "empty.jsonl"
    write_corpus(path, [EventSequence((), 3.0, seq_id="e", allow_empty=True)])
    (seq,) = read_corpus(path, num_types=2)
    assert len(seq) == 0
    assert seq.allow_empty


def test_malformed_line_reports_line_number(temp_dir: Path):
    """Test that a broken line is reported with its position."""
    path = temp_dir / "bad.jsonl"
    path.write_text('{"T": 1.0, "events": []}\n{not json\n', encoding="utf-8")
    with pytest.raises(CorpusFormatError, match=":2:") as info:
        read_corpus(path)
    assert info.value.line_number == 2
    assert info.value.exit_code == 2


@pytest.mark.parametrize(
    "record",
    [
        {"events": [{"t": 0.5, "k": 0}]},
        {"T": 1.0, "events": [{"t": 0.5}]},
        {"T": 1.0, "events": "none"},
        [1, 2, 3],
    ],
)
def test_missing_fields_rejected(temp_dir: Path, record):
    """Test records without horizon, type or event list."""
    path = _write_lines(temp_dir / "bad.jsonl", [record])
    with pytest.raises(CorpusFormatError):
        read_corpus(path)


def test_empty_file_rejected(temp_dir: Path):
    """Test that a corpus needs at least one sequence."""
    path = temp_dir / "empty.jsonl"
    path.write_text("\n", encoding="utf-8")
    with pytest.raises(CorpusFormatError):
        read_corpus(path)


def test_type_count_mismatch(temp_dir: Path, toy_corpus):
    """Test a corpus with more types than the model supports."""
    path = temp_dir / "corpus.jsonl"
    write_corpus(path, toy_corpus)
    with pytest.raises(TypeCountMismatchError):
        read_corpus(path, num_types=2)


def test_invalid_sequence_rejected(temp_dir: Path):
    """Test that sequence invariants are checked on read."""
    path = _write_lines(
        temp_dir / "c.jsonl", [{"T": 1.0, "events": [{"t": 0.5, "k": 0}, {"t": 0.4, "k": 1}]}]
    )
    with pytest.raises(NonMonotonicTimeError):
        read_corpus(path)
