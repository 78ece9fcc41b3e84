"""Tests for the binary checkpoint format."""

import hashlib
import struct
from pathlib import Path

import pytest
import torch
from mocha_causal.core.hyperparameters import HyperParameters
from mocha_causal.core.parameters import ModelParameters
from mocha_causal.utils.errors import CheckpointVersionError, CorruptCheckpointError
from mocha_causal.utils.io.checkpoint_io import (
    MAGIC,
    checkpoint_bytes,
    load_checkpoint,
    parse_checkpoint,
    save_checkpoint,
)


def test_round_trip_is_exact(
    temp_dir: Path, small_params: ModelParameters, small_hp: HyperParameters
):
    """Test that tensors, hyper-parameters and metadata survive unchanged."""
    path = temp_dir / "model.ckpt"
    save_checkpoint(path, small_params, small_hp, {"best_epoch": 4, "seed": 0})
    loaded = load_checkpoint(path)
    assert loaded.hp == small_hp
    assert loaded.metadata == {"best_epoch": 4, "seed": 0}
    for name, tensor in small_params.tensors().items():
        restored = loaded.params.tensors()[name]
        assert restored.dtype == torch.float64
        assert torch.equal(restored, tensor)


def test_bytes_are_deterministic(small_params: ModelParameters, small_hp: HyperParameters):
    """Test that writing the same parameters twice yields identical bytes."""
    first = checkpoint_bytes(small_params, small_hp, {"a": 1, "b": 2})
    second = checkpoint_bytes(small_params, small_hp, {"b": 2, "a": 1})
    assert first == second
    assert first.startswith(MAGIC)


@pytest.mark.parametrize(
    "corrupt",
    [
        lambda data: data[:40] + bytes([data[40] ^ 0xFF]) + data[41:],
        lambda data: data[: len(data) // 2],
        lambda data: b"NOTMOCHA" + data[8:],
        lambda data: b"",
    ],
    ids=["flipped-byte", "truncated", "bad-magic", "empty"],
)
def test_corruption_detected(small_params: ModelParameters, small_hp: HyperParameters, corrupt):
    """Test that any damage to the file is reported as corruption."""
    data = checkpoint_bytes(small_params, small_hp)
    with pytest.raises(CorruptCheckpointError) as info:
        parse_checkpoint(corrupt(data))
    assert info.value.exit_code == 2


def test_unsupported_version(small_params: ModelParameters, small_hp: HyperParameters):
    """Test a well-formed file written by a newer format version."""
    body = checkpoint_bytes(small_params, small_hp)[:-32]
    newer = MAGIC + struct.pack("<H", 2) + body[len(MAGIC) + 2 :]
    with pytest.raises(CheckpointVersionError):
        parse_checkpoint(newer + hashlib.sha256(newer).digest())


def test_missing_file(temp_dir: Path):
    """Test loading a checkpoint that does not exist."""
    with pytest.raises(CorruptCheckpointError):
        load_checkpoint(temp_dir / "absent.ckpt")
