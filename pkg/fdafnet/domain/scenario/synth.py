"""
Synthetic stand-ins for measured AIRs and speech: exponentially decaying
noise responses, white and AR(1) amplitude-modulated sources.
"""
from __future__ import annotations

import math

import numpy as np
from scipy.signal import lfilter

from ..shared.errors import InvalidConfigError, InvalidInputError
from ..shared.repositories import Randomizer

AR1_POLE = 0.9
MODULATION_HZ = (0.5, 4.0)
PAUSE_SECONDS = (0.2, 0.6)
PAUSE_GAIN = 0.01


def decay_envelope(length: int, t60: float, sample_rate: int) -> np.ndarray:
    t = np.arange(length, dtype=np.float64) / sample_rate
    if math.isinf(t60):
        return np.ones(length, dtype=np.float64)
    return np.exp(-3.0 * math.log(10.0) * t / t60)


def synth_air(
    length: int,
    t60: float,
    randomizer: Randomizer,
    *,
    sample_rate: int = 16000,
    onset: int | None = None,
    onset_range: tuple[int, int] = (8, 32),
) -> np.ndarray:
    """Unit-energy white noise under an exponential T60 envelope, after `onset` leading zeros."""
    if length < 1:
        raise InvalidConfigError(f"AIR length must be >= 1, got {length}")
    if not t60 > 0:
        raise InvalidConfigError(f"t60 must be positive, got {t60}")
    if onset is None:
        onset = randomizer.integers(onset_range[0], onset_range[1] + 1)
    onset = min(int(onset), length - 1)
    body = randomizer.normal(length - onset) * decay_envelope(length - onset, t60, sample_rate)
    air = np.concatenate((np.zeros(onset), body))
    return air / np.sqrt(np.sum(air**2))


def _pause_gate(length: int, randomizer: Randomizer, sample_rate: int) -> np.ndarray:
    gate = np.ones(length, dtype=np.float64)
    count = int(length / sample_rate / 2.0)
    for _ in range(count):
        width = int(randomizer.uniform(*PAUSE_SECONDS) * sample_rate)
        start = randomizer.integers(0, max(1, length - width))
        gate[start : start + width] = PAUSE_GAIN
    return gate


def synth_source(kind: str, duration: float, randomizer: Randomizer, *, sample_rate: int = 16000) -> np.ndarray:
    if duration <= 0:
        raise InvalidConfigError(f"duration must be positive, got {duration}")
    length = int(round(duration * sample_rate))
    excitation = randomizer.normal(length)
    if kind == "white":
        return excitation
    if kind != "ar1_modulated":
        raise InvalidConfigError(f"unknown source kind {kind!r}")
    ar = lfilter([math.sqrt(1.0 - AR1_POLE**2)], [1.0, -AR1_POLE], excitation)
    t = np.arange(length, dtype=np.float64) / sample_rate
    rate = randomizer.uniform(*MODULATION_HZ)
    phase = randomizer.uniform(0.0, 2.0 * math.pi)
    envelope = 0.6 + 0.4 * np.sin(2.0 * math.pi * rate * t + phase)
    return ar * envelope * _pause_gate(length, randomizer, sample_rate)


def mix_at_snr(clean_ref: np.ndarray, noise: np.ndarray, snr_db: float) -> np.ndarray:
    """Scales `noise` so that 10 log10(||clean_ref||^2 / ||scaled||^2) == snr_db."""
    clean_energy = float(np.sum(np.square(clean_ref, dtype=np.float64)))
    noise_energy = float(np.sum(np.square(noise, dtype=np.float64)))
    if clean_energy <= 0 or noise_energy <= 0:
        raise InvalidInputError("SNR mixing needs non-zero reference and noise energy")
    gain = math.sqrt(clean_energy / (noise_energy * 10.0 ** (snr_db / 10.0)))
    return np.asarray(noise, dtype=np.float64) * gain


class SyntheticSignals:
    """SignalSource built only from the generators above."""

    def __init__(self, *, sample_rate: int, source_kind: str, interferer_kind: str, onset_range: tuple[int, int]):
        self._sample_rate = sample_rate
        self._source_kind = source_kind
        self._interferer_kind = interferer_kind
        self._onset_range = onset_range

    def source(self, length: int, randomizer: Randomizer) -> np.ndarray:
        return synth_source(self._source_kind, length / self._sample_rate, randomizer, sample_rate=self._sample_rate)[:length]

    def interferer(self, length: int, randomizer: Randomizer) -> np.ndarray:
        return synth_source(self._interferer_kind, length / self._sample_rate, randomizer, sample_rate=self._sample_rate)[:length]

    def air(self, length: int, t60: float, onset: int, randomizer: Randomizer) -> np.ndarray:
        return synth_air(length, t60, randomizer, sample_rate=self._sample_rate, onset=onset)
