from __future__ import annotations

import logging
from pathlib import Path

import numpy as np

from ...domain.scenario import SignalSource
from ...domain.shared import InvalidInputError, Randomizer
from ..audio import read_mono

logger = logging.getLogger(__name__)


def _wav_files(directory: str | Path) -> list[Path]:
    root = Path(directory)
    if not root.is_dir():
        raise InvalidInputError(f"corpus directory not found: {directory}")
    files = sorted(p for p in root.rglob("*") if p.suffix.lower() == ".wav")
    if not files:
        raise InvalidInputError(f"no WAV files under {directory}")
    return files


def crop_or_tile(samples: np.ndarray, length: int, randomizer: Randomizer) -> np.ndarray:
    """Random crop of a longer track; shorter tracks are repeated until they cover `length`."""
    if samples.size == 0:
        raise InvalidInputError("empty corpus file")
    if samples.size < length:
        repeats = -(-length // samples.size)
        samples = np.tile(samples, repeats)
    start = randomizer.integers(0, samples.size - length + 1)
    return samples[start : start + length]


class WavCorpusSignals:
    """
    Signal source backed by user WAV material. Each directory is optional;
    missing ones fall back to `fallback`.
    """

    def __init__(
        self,
        *,
        sample_rate: int,
        fallback: SignalSource,
        source_dir: str | None = None,
        interferer_dir: str | None = None,
        air_dir: str | None = None,
    ):
        self._sample_rate = sample_rate
        self._fallback = fallback
        self._sources = _wav_files(source_dir) if source_dir else None
        self._interferers = _wav_files(interferer_dir) if interferer_dir else None
        self._airs = _wav_files(air_dir) if air_dir else None
        logger.info(
            "WAV corpus: %s sources, %s interferers, %s AIRs",
            len(self._sources or []),
            len(self._interferers or []),
            len(self._airs or []),
        )

    def _track(self, files: list[Path], length: int, randomizer: Randomizer) -> np.ndarray:
        samples, _ = read_mono(randomizer.choice(files), sample_rate=self._sample_rate)
        return crop_or_tile(samples, length, randomizer)

    def source(self, length: int, randomizer: Randomizer) -> np.ndarray:
        if self._sources is None:
            return self._fallback.source(length, randomizer)
        return self._track(self._sources, length, randomizer)

    def interferer(self, length: int, randomizer: Randomizer) -> np.ndarray:
        if self._interferers is None:
            return self._fallback.interferer(length, randomizer)
        return self._track(self._interferers, length, randomizer)

    def air(self, length: int, t60: float, onset: int, randomizer: Randomizer) -> np.ndarray:
        if self._airs is None:
            return self._fallback.air(length, t60, onset, randomizer)
        samples, _ = read_mono(randomizer.choice(self._airs), sample_rate=self._sample_rate)
        air = np.zeros(length)
        air[: min(length, samples.size)] = samples[:length]
        energy = float(np.sum(air**2))
        if energy <= 0:
            raise InvalidInputError("measured AIR has zero energy after cropping")
        return air / np.sqrt(energy)
