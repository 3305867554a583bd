from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from ..domain.scenario import ScenarioBuilder, SignalSource, SyntheticSignals
from ..infrastructure.metrics import MetricsClient, metrics
from ..infrastructure.random import NumpyRandomizer
from ..infrastructure.storage import WavCorpusSignals
from .config import RunConfig
from .controller_factory import ControllerFactory
from .presenters import ReportPresenter

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AppConfig:
    run: RunConfig
    metrics_log_path: str | None = "data/metrics/actions.log"
    workers: int | None = None
    config_path: str | None = None
    argv: tuple[str, ...] = ()


def randomizer_from_seed(seed: np.random.SeedSequence) -> NumpyRandomizer:
    return NumpyRandomizer.from_seed(seed)


class AppContainer:
    def __init__(
        self,
        *,
        config: AppConfig,
        controllers: ControllerFactory,
        scenario_builder: ScenarioBuilder,
        presenter: ReportPresenter,
        metrics_client: MetricsClient,
    ):
        self.config = config
        self.controllers = controllers
        self.scenario_builder = scenario_builder
        self.presenter = presenter
        self.metrics = metrics_client


def _signal_source(run: RunConfig) -> SignalSource:
    scenario = run.scenario_config()
    synthetic = SyntheticSignals(
        sample_rate=scenario.sample_rate,
        source_kind=scenario.source_kind,
        interferer_kind=scenario.interferer_kind,
        onset_range=scenario.onset_delay,
    )
    if not (scenario.source_dir or scenario.interferer_dir or scenario.air_dir):
        return synthetic
    return WavCorpusSignals(
        sample_rate=scenario.sample_rate,
        fallback=synthetic,
        source_dir=scenario.source_dir,
        interferer_dir=scenario.interferer_dir,
        air_dir=scenario.air_dir,
    )


def create_container(config: AppConfig, *, metrics_client: MetricsClient | None = None) -> AppContainer:
    run = config.run
    scenario_builder = ScenarioBuilder(
        run.scenario_config(),
        randomizer_factory=randomizer_from_seed,
        signals=_signal_source(run),
    )
    logger.info(
        "Container ready: M=%s R=%s L=%s P=%s, workers=%s",
        run.filter.fft_size,
        run.filter.hop,
        run.dims.filter_length,
        run.network.hidden_size,
        config.workers,
    )
    return AppContainer(
        config=config,
        controllers=ControllerFactory(run),
        scenario_builder=scenario_builder,
        presenter=ReportPresenter(),
        metrics_client=metrics_client or metrics,
    )
