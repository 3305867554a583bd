"""
Binary checkpoint container, little-endian:

    magic b"FDNC" | u32 version | u32 meta_len | meta (UTF-8 JSON) | u32 count
    count x ( u16 name_len | name | u8 dtype | u8 ndim | u32 dims[ndim] | data )

dtype 1 = float32, 2 = float64.
"""
from __future__ import annotations

import json
import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from ...domain.shared import CheckpointFormatError

MAGIC = b"FDNC"
VERSION = 1

DTYPE_CODES: dict[int, np.dtype] = {1: np.dtype("<f4"), 2: np.dtype("<f8")}
_CODES_BY_DTYPE = {np.dtype("float32"): 1, np.dtype("float64"): 2}


@dataclass(frozen=True, eq=False)
class Checkpoint:
    meta: dict[str, Any]
    tensors: dict[str, np.ndarray] = field(default_factory=dict)
    version: int = VERSION


def encode_checkpoint(checkpoint: Checkpoint) -> bytes:
    meta = json.dumps(checkpoint.meta, sort_keys=True, ensure_ascii=False).encode("utf-8")
    chunks = [MAGIC, struct.pack("<II", checkpoint.version, len(meta)), meta, struct.pack("<I", len(checkpoint.tensors))]
    for name, array in checkpoint.tensors.items():
        array = np.asarray(array)
        code = _CODES_BY_DTYPE.get(array.dtype)
        if code is None:
            raise CheckpointFormatError(f"tensor {name}: unsupported dtype {array.dtype}")
        encoded = name.encode("utf-8")
        chunks.append(struct.pack("<H", len(encoded)))
        chunks.append(encoded)
        chunks.append(struct.pack("<BB", code, array.ndim))
        chunks.append(struct.pack(f"<{array.ndim}I", *array.shape))
        chunks.append(np.ascontiguousarray(array, dtype=DTYPE_CODES[code]).tobytes())
    return b"".join(chunks)


class _Reader:
    def __init__(self, payload: bytes):
        self._payload = payload
        self._offset = 0

    def take(self, size: int) -> bytes:
        end = self._offset + size
        if end > len(self._payload):
            raise CheckpointFormatError("checkpoint is truncated")
        chunk = self._payload[self._offset : end]
        self._offset = end
        return chunk

    def unpack(self, fmt: str) -> tuple:
        return struct.unpack(fmt, self.take(struct.calcsize(fmt)))

    @property
    def exhausted(self) -> bool:
        return self._offset == len(self._payload)


def decode_checkpoint(payload: bytes) -> Checkpoint:
    reader = _Reader(payload)
    if reader.take(4) != MAGIC:
        raise CheckpointFormatError("not a checkpoint: bad magic")
    version, meta_len = reader.unpack("<II")
    if version != VERSION:
        raise CheckpointFormatError(f"unsupported checkpoint version {version}")
    try:
        meta = json.loads(reader.take(meta_len).decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CheckpointFormatError(f"corrupt checkpoint metadata: {exc}") from exc
    (count,) = reader.unpack("<I")
    tensors: dict[str, np.ndarray] = {}
    for _ in range(count):
        (name_len,) = reader.unpack("<H")
        name = reader.take(name_len).decode("utf-8")
        code, ndim = reader.unpack("<BB")
        if code not in DTYPE_CODES:
            raise CheckpointFormatError(f"tensor {name}: unknown dtype code {code}")
        shape = reader.unpack(f"<{ndim}I") if ndim else ()
        dtype = DTYPE_CODES[code]
        size = int(np.prod(shape, dtype=np.int64)) if shape else 1
        data = np.frombuffer(reader.take(size * dtype.itemsize), dtype=dtype).reshape(shape)
        tensors[name] = data.copy()
    if not reader.exhausted:
        raise CheckpointFormatError("trailing bytes after the last tensor")
    return Checkpoint(meta=meta, tensors=tensors, version=version)


def write_checkpoint(path: str | Path, checkpoint: Checkpoint) -> Path:
    """Atomic replace through a temporary sibling file."""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    tmp = target.with_name(target.name + ".tmp")
    tmp.write_bytes(encode_checkpoint(checkpoint))
    tmp.replace(target)
    return target


def read_checkpoint(path: str | Path) -> Checkpoint:
    p = Path(path)
    if not p.exists():
        raise CheckpointFormatError(f"checkpoint not found: {path}")
    return decode_checkpoint(p.read_bytes())
