"""
Binary checkpoint format.

Layout, all integers little-endian::

    magic      8 bytes   b"MOCHACKP"
    version    uint16
    header     uint32 length + UTF-8 JSON (sorted keys)
    count      uint16 number of tensors
    tensors    per tensor: uint16 name length, name, uint8 ndim,
               ndim x uint32 dims, float64 little-endian data
    digest     32 bytes  SHA-256 of everything before it

The header holds the hyper-parameters and the summary keys K, d, d_attn,
h and L. Writing the same parameters twice yields identical bytes.
"""

import hashlib
import json
import logging
import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np
import torch

from ...core.hyperparameters import HyperParameters
from ...core.parameters import DTYPE, TENSOR_NAMES, ModelParameters, validate_parameters
from ..errors import (
    CheckpointVersionError,
    CorruptCheckpointError,
    HyperParameterError,
    NumericalError,
)

logger = logging.getLogger(__name__)

MAGIC = b"MOCHACKP"
FORMAT_VERSION = 1
DIGEST_SIZE = hashlib.sha256().digest_size


@dataclass(frozen=True)
class Checkpoint:
    params: ModelParameters
    hp: HyperParameters
    metadata: dict[str, Any] = field(default_factory=dict)


def checkpoint_bytes(
    params: ModelParameters, hp: HyperParameters, metadata: dict[str, Any] | None = None
) -> bytes:
    """Serialize parameters and hyper-parameters."""
    header = {
        "format_version": FORMAT_VERSION,
        "K": hp.num_types,
        "d": hp.half_dim,
        "d_attn": hp.attn_dim,
        "h": hp.hidden_dim,
        "L": hp.order,
        "hyperparameters": hp.to_dict(),
        "metadata": metadata or {},
    }
    header_bytes = json.dumps(header, sort_keys=True).encode("utf-8")
    parts = [MAGIC, struct.pack("<H", FORMAT_VERSION)]
    parts.append(struct.pack("<I", len(header_bytes)) + header_bytes)
    parts.append(struct.pack("<H", len(TENSOR_NAMES)))
    for name, tensor in params.tensors().items():
        encoded = name.encode("ascii")
        array = tensor.detach().cpu().numpy().astype("<f8")
        parts.append(struct.pack("<H", len(encoded)) + encoded)
        parts.append(struct.pack("<B", array.ndim))
        parts.append(struct.pack(f"<{array.ndim}I", *array.shape))
        parts.append(array.tobytes(order="C"))
    body = b"".join(parts)
    return body + hashlib.sha256(body).digest()


class _Reader:
    def __init__(self, data: bytes) -> None:
        self.data = data
        self.offset = 0

    def take(self, size: int) -> bytes:
        if self.offset + size > len(self.data):
            raise CorruptCheckpointError("Checkpoint is truncated")
        chunk = self.data[self.offset : self.offset + size]
        self.offset += size
        return chunk

    def unpack(self, fmt: str) -> tuple:
        return struct.unpack(fmt, self.take(struct.calcsize(fmt)))


def parse_checkpoint(data: bytes) -> Checkpoint:
    """
    Deserialize a checkpoint.

    Raises:
        CorruptCheckpointError: on bad magic, truncation, digest mismatch or
            inconsistent contents.
        CheckpointVersionError: if the format version is not supported.
    """
    if len(data) < len(MAGIC) + 2 + DIGEST_SIZE or not data.startswith(MAGIC):
        raise CorruptCheckpointError("Not a checkpoint file (bad magic or too short)")
    body, digest = data[:-DIGEST_SIZE], data[-DIGEST_SIZE:]
    if hashlib.sha256(body).digest() != digest:
        raise CorruptCheckpointError("Checkpoint digest mismatch")

    reader = _Reader(body)
    reader.take(len(MAGIC))
    (version,) = reader.unpack("<H")
    if version != FORMAT_VERSION:
        raise CheckpointVersionError(version, FORMAT_VERSION)
    (header_length,) = reader.unpack("<I")
    try:
        header = json.loads(reader.take(header_length).decode("utf-8"))
        hp = HyperParameters.from_dict(header["hyperparameters"])
    except (UnicodeDecodeError, json.JSONDecodeError, KeyError, HyperParameterError) as e:
        raise CorruptCheckpointError(f"Unreadable checkpoint header: {e}") from e

    (count,) = reader.unpack("<H")
    tensors: dict[str, torch.Tensor] = {}
    for _ in range(count):
        (name_length,) = reader.unpack("<H")
        name = reader.take(name_length).decode("ascii", errors="replace")
        (ndim,) = reader.unpack("<B")
        shape = reader.unpack(f"<{ndim}I")
        size = int(np.prod(shape)) if ndim else 1
        array = np.frombuffer(reader.take(8 * size), dtype="<f8").reshape(shape)
        tensors[name] = torch.from_numpy(array.astype(np.float64)).to(DTYPE)
    if reader.offset != len(body):
        raise CorruptCheckpointError("Trailing bytes after the last tensor")
    if set(tensors) != set(TENSOR_NAMES):
        raise CorruptCheckpointError(f"Unexpected tensor set {sorted(tensors)}")

    params = ModelParameters.from_tensors(tensors)
    try:
        validate_parameters(params, hp)
    except (HyperParameterError, NumericalError) as e:
        raise CorruptCheckpointError(str(e)) from e
    return Checkpoint(params=params, hp=hp, metadata=header.get("metadata", {}))


def save_checkpoint(
    path: Path,
    params: ModelParameters,
    hp: HyperParameters,
    metadata: dict[str, Any] | None = None,
) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(checkpoint_bytes(params, hp, metadata))
    logger.info(f"Saved checkpoint to {path}")


def load_checkpoint(path: Path) -> Checkpoint:
    try:
        data = path.read_bytes()
    except OSError as e:
        raise CorruptCheckpointError(f"Cannot read checkpoint {path}: {e}") from e
    checkpoint = parse_checkpoint(data)
    logger.info(
        f"Loaded checkpoint {path} (K={checkpoint.hp.num_types}, "
        f"variant={checkpoint.hp.variant.value})"
    )
    return checkpoint
