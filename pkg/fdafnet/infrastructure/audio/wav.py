from __future__ import annotations

from pathlib import Path

import numpy as np
import soundfile as sf

from ...domain.shared import InvalidInputError


def read_mono(path: str | Path, *, sample_rate: int | None = None) -> tuple[np.ndarray, int]:
    """Reads a mono WAV as float64; rejects multichannel files and rate mismatches."""
    p = Path(path)
    if not p.exists():
        raise InvalidInputError(f"WAV file not found: {path}")
    try:
        data, rate = sf.read(str(p), dtype="float64", always_2d=True)
    except RuntimeError as exc:
        raise InvalidInputError(f"cannot read {path}: {exc}") from exc
    if data.shape[1] != 1:
        raise InvalidInputError(f"{path}: expected mono, got {data.shape[1]} channels")
    if sample_rate is not None and rate != sample_rate:
        raise InvalidInputError(f"{path}: sample rate {rate} Hz, expected {sample_rate} Hz")
    return data[:, 0], int(rate)


def write_mono(path: str | Path, samples: np.ndarray, sample_rate: int) -> Path:
    """Writes a 32-bit float WAV; samples above full scale are kept unclipped."""
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    try:
        sf.write(str(p), np.asarray(samples, dtype=np.float64), sample_rate, subtype="FLOAT")
    except RuntimeError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc
    return p
