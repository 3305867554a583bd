from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ...shared.errors import InvalidConfigError
from ...shared.models import FilterDims

SOURCE_KINDS = ("white", "ar1_modulated")

TRAIN_SPLIT = 0
TEST_SPLIT = 1
SPLITS = {"train": TRAIN_SPLIT, "test": TEST_SPLIT}


def _check_range(name: str, value: Optional[tuple[float, float]]) -> None:
    if value is None:
        return
    lo, hi = value
    if lo > hi:
        raise InvalidConfigError(f"{name}: empty range [{lo}, {hi}]")


@dataclass(frozen=True)
class ScenarioConfig:
    sample_rate: int = 16000
    fft_size: int = 256
    hop: int = 128
    air_length: Optional[int] = None
    duration: float = 10.0
    switch_window: tuple[float, float] = (7.2, 8.8)
    speech_snr_db: Optional[tuple[float, float]] = (-10.0, 10.0)
    stationary_snr_db: Optional[tuple[float, float]] = (25.0, 35.0)
    t60_range: tuple[float, float] = (0.12, 0.78)
    onset_delay: tuple[int, int] = (8, 32)
    source_kind: str = "ar1_modulated"
    interferer_kind: str = "ar1_modulated"
    source_level: float = 0.05
    seed: int = 0
    source_dir: Optional[str] = None
    interferer_dir: Optional[str] = None
    air_dir: Optional[str] = None

    def __post_init__(self) -> None:
        dims = FilterDims(self.fft_size, self.hop)
        if self.sample_rate <= 0:
            raise InvalidConfigError(f"sample_rate must be positive, got {self.sample_rate}")
        if self.air_length is not None and self.air_length <= dims.filter_length:
            raise InvalidConfigError(
                f"air_length K={self.air_length} must exceed the filter length L={dims.filter_length}"
            )
        t_lo, t_hi = self.switch_window
        if not (0.0 <= t_lo < t_hi < self.duration):
            raise InvalidConfigError(
                f"switch window [{t_lo}, {t_hi}] must be increasing and end before duration {self.duration}"
            )
        _check_range("speech_snr_db", self.speech_snr_db)
        _check_range("stationary_snr_db", self.stationary_snr_db)
        _check_range("t60_range", self.t60_range)
        _check_range("onset_delay", self.onset_delay)
        if self.t60_range[0] <= 0:
            raise InvalidConfigError("t60 values must be positive")
        if self.onset_delay[0] < 0 or self.onset_delay[1] >= self.resolved_air_length:
            raise InvalidConfigError(f"onset delay {self.onset_delay} does not fit an AIR of {self.resolved_air_length} taps")
        for name in ("source_kind", "interferer_kind"):
            if getattr(self, name) not in SOURCE_KINDS:
                raise InvalidConfigError(f"{name} must be one of {SOURCE_KINDS}, got {getattr(self, name)!r}")
        if self.source_level <= 0:
            raise InvalidConfigError(f"source_level must be positive, got {self.source_level}")
        self.switch_block_range()

    @property
    def dims(self) -> FilterDims:
        return FilterDims(self.fft_size, self.hop)

    @property
    def filter_length(self) -> int:
        return self.fft_size - self.hop

    @property
    def resolved_air_length(self) -> int:
        return self.air_length if self.air_length is not None else 4 * self.filter_length

    @property
    def num_blocks(self) -> int:
        return int(self.duration * self.sample_rate) // self.hop

    @property
    def num_samples(self) -> int:
        return self.num_blocks * self.hop

    def switch_block_range(self) -> tuple[int, int]:
        """Inclusive range of block indices whose start time lies in the switch window."""
        t_lo, t_hi = self.switch_window
        lo = math.ceil(t_lo * self.sample_rate / self.hop - 1e-9)
        hi = math.floor(t_hi * self.sample_rate / self.hop + 1e-9)
        hi = min(hi, self.num_blocks - 1)
        if lo > hi:
            raise InvalidConfigError(f"switch window {self.switch_window} contains no block boundary")
        return lo, hi


@dataclass(frozen=True)
class SegmentDraw:
    t60: float
    onset: int
    speech_snr_db: Optional[float]
    stationary_snr_db: Optional[float]


@dataclass(frozen=True, eq=False)
class Scenario:
    x: np.ndarray
    d: np.ndarray
    n: np.ndarray
    air_pre: np.ndarray
    air_post: np.ndarray
    switch_block: int
    hop: int
    sample_rate: int
    seed: int = 0
    split: int = TRAIN_SPLIT
    index: int = 0
    draws: tuple[SegmentDraw, ...] = ()
    noise_components: dict[str, np.ndarray] = field(default_factory=dict, compare=False, repr=False)

    @property
    def y(self) -> np.ndarray:
        return self.d + self.n

    @property
    def num_samples(self) -> int:
        return int(self.x.shape[0])

    @property
    def num_blocks(self) -> int:
        return self.num_samples // self.hop

    @property
    def switch_sample(self) -> int:
        return self.switch_block * self.hop

    @property
    def air_length(self) -> int:
        return int(self.air_pre.shape[0])


def scenario_seed(base_seed: int, split: int, index: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([base_seed, split, index])
