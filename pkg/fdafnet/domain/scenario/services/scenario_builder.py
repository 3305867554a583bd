from __future__ import annotations

import logging
from typing import Callable, Sequence

import numpy as np
from scipy.signal import fftconvolve

from ...shared.repositories import Randomizer
from ..models import TRAIN_SPLIT, Scenario, ScenarioConfig, SegmentDraw, scenario_seed
from ..repositories import SignalSource
from ..synth import SyntheticSignals, mix_at_snr

logger = logging.getLogger(__name__)

RandomizerFactory = Callable[[np.random.SeedSequence], Randomizer]


class ScenarioBuilder:
    """
    Собирает сценарий: входной сигнал, две истинные AIR со сменой на границе
    блока, двухкомпонентный шум с заданными SNR на каждом сегменте.
    """

    def __init__(
        self,
        config: ScenarioConfig,
        *,
        randomizer_factory: RandomizerFactory,
        signals: SignalSource | None = None,
    ):
        self._config = config
        self._randomizer_factory = randomizer_factory
        self._signals = signals or SyntheticSignals(
            sample_rate=config.sample_rate,
            source_kind=config.source_kind,
            interferer_kind=config.interferer_kind,
            onset_range=config.onset_delay,
        )

    @property
    def config(self) -> ScenarioConfig:
        return self._config

    def _draw_segment(self, randomizer: Randomizer) -> SegmentDraw:
        cfg = self._config
        t60 = float(randomizer.uniform(*cfg.t60_range))
        onset = randomizer.integers(cfg.onset_delay[0], cfg.onset_delay[1] + 1)
        speech = float(randomizer.uniform(*cfg.speech_snr_db)) if cfg.speech_snr_db else None
        stationary = float(randomizer.uniform(*cfg.stationary_snr_db)) if cfg.stationary_snr_db else None
        return SegmentDraw(t60=t60, onset=int(onset), speech_snr_db=speech, stationary_snr_db=stationary)

    def _noise(
        self,
        echo: np.ndarray,
        draw: SegmentDraw,
        randomizer: Randomizer,
    ) -> tuple[np.ndarray, np.ndarray]:
        length = echo.shape[0]
        speech = np.zeros(length)
        stationary = np.zeros(length)
        if draw.speech_snr_db is not None:
            speech = mix_at_snr(echo, self._signals.interferer(length, randomizer), draw.speech_snr_db)
        if draw.stationary_snr_db is not None:
            stationary = mix_at_snr(echo, randomizer.normal(length), draw.stationary_snr_db)
        return speech, stationary

    def build(self, index: int, split: int = TRAIN_SPLIT) -> Scenario:
        cfg = self._config
        randomizer = self._randomizer_factory(scenario_seed(cfg.seed, split, index))
        total = cfg.num_samples
        air_length = cfg.resolved_air_length

        lo, hi = cfg.switch_block_range()
        switch_block = randomizer.integers(lo, hi + 1)
        split_at = switch_block * cfg.hop

        draws = (self._draw_segment(randomizer), self._draw_segment(randomizer))
        airs = [self._signals.air(air_length, draw.t60, draw.onset, randomizer) for draw in draws]
        sources = [self._signals.source(total, randomizer) for _ in draws]

        x = np.concatenate((sources[0][:split_at], sources[1][split_at:]))
        rms = float(np.sqrt(np.mean(x**2)))
        if rms > 0:
            x = x * (cfg.source_level / rms)

        d = np.empty(total)
        d[:split_at] = fftconvolve(x, airs[0])[:split_at]
        d[split_at:] = fftconvolve(x, airs[1])[split_at:total]

        speech = np.zeros(total)
        stationary = np.zeros(total)
        for draw, segment in zip(draws, (slice(0, split_at), slice(split_at, total))):
            speech[segment], stationary[segment] = self._noise(d[segment], draw, randomizer)
        n = speech + stationary

        logger.debug("Scenario %s/%s: switch block %s, draws %s", split, index, switch_block, draws)
        return Scenario(
            x=x,
            d=d,
            n=n,
            air_pre=airs[0],
            air_post=airs[1],
            switch_block=int(switch_block),
            hop=cfg.hop,
            sample_rate=cfg.sample_rate,
            seed=cfg.seed,
            split=split,
            index=index,
            draws=draws,
            noise_components={"speech": speech, "stationary": stationary},
        )

    def build_many(self, count: int, split: int = TRAIN_SPLIT, *, start: int = 0) -> Sequence[Scenario]:
        return [self.build(start + i, split) for i in range(count)]
