from __future__ import annotations

import logging
import time
from dataclasses import dataclass
from typing import Protocol, Sequence

import torch

from ...neural import flat_parameters, load_flat_parameters
from ...pipeline import StreamRunner
from ...shared.errors import InvalidConfigError, TrainingDivergedError
from ...shared.repositories import Randomizer
from ..batching import TrainingExample, collate
from ..loss import gradient, sequence_loss
from ..optimizer import AdamOptimizer, OptimizerState

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TrainingSettings:
    epochs: int = 10
    batch_size: int = 4
    truncation: int = 0
    checkpoint_every: int = 1

    def __post_init__(self) -> None:
        if self.epochs < 0:
            raise InvalidConfigError(f"epochs must be >= 0, got {self.epochs}")
        if self.batch_size < 1:
            raise InvalidConfigError(f"batch_size must be >= 1, got {self.batch_size}")
        if self.truncation < 0:
            raise InvalidConfigError(f"truncation must be >= 0, got {self.truncation}")
        if self.checkpoint_every < 1:
            raise InvalidConfigError(f"checkpoint_every must be >= 1, got {self.checkpoint_every}")


@dataclass(frozen=True)
class BatchReport:
    epoch: int
    batch_index: int
    loss: float
    grad_norm: float
    wall_time_s: float


@dataclass(frozen=True)
class EpochReport:
    epoch: int
    mean_loss: float
    grad_norm: float
    wall_time_s: float
    optimizer_steps: int


@dataclass(frozen=True)
class TrainingSnapshot:
    theta: torch.Tensor
    optimizer: OptimizerState
    epoch: int


class TrainingObserver(Protocol):
    def on_batch(self, report: BatchReport) -> None: ...

    def on_epoch(self, report: EpochReport, snapshot: TrainingSnapshot) -> None: ...


class Trainer:
    """
    Сервис обучения: эпохи по перемешанным сценариям, мини-батчи с
    усреднением градиента, шаг ADAM, откат к последнему удачному состоянию
    при расхождении.
    """

    def __init__(
        self,
        *,
        network: torch.nn.Module,
        runner: StreamRunner,
        optimizer: AdamOptimizer,
        randomizer: Randomizer,
        settings: TrainingSettings,
        observer: TrainingObserver | None = None,
    ):
        if not runner.strict:
            raise InvalidConfigError("training needs a strict stream runner")
        self._network = network
        self._runner = runner
        self._optimizer = optimizer
        self._randomizer = randomizer
        self._settings = settings
        self._observer = observer

    def snapshot(self, epoch: int) -> TrainingSnapshot:
        return TrainingSnapshot(
            theta=flat_parameters(self._network).detach().clone(),
            optimizer=self._optimizer.state(),
            epoch=epoch,
        )

    def restore(self, snapshot: TrainingSnapshot) -> None:
        load_flat_parameters(self._network, snapshot.theta)
        self._optimizer.load_state(snapshot.optimizer)

    def train_batch(self, examples: Sequence[TrainingExample]) -> tuple[float, float]:
        batch = collate(examples)
        loss, trace = sequence_loss(
            self._runner,
            batch,
            self._optimizer.parameters,
            truncation=self._settings.truncation,
        )
        grad = gradient(trace)
        if not bool(torch.isfinite(grad).all()):
            raise TrainingDivergedError("non-finite gradient", block_index=batch.num_blocks - 1)
        grad_norm = self._optimizer.update(grad)
        return float(loss.detach()), grad_norm

    def train(self, corpus: Sequence[TrainingExample], *, start_epoch: int = 0) -> list[EpochReport]:
        if not corpus:
            raise InvalidConfigError("training corpus is empty")
        reports: list[EpochReport] = []
        last_good = self.snapshot(start_epoch)
        order = list(range(len(corpus)))
        for epoch in range(start_epoch + 1, start_epoch + self._settings.epochs + 1):
            started = time.perf_counter()
            self._randomizer.shuffle(order)
            losses: list[float] = []
            norms: list[float] = []
            size = self._settings.batch_size
            try:
                for batch_index, offset in enumerate(range(0, len(order), size)):
                    examples = [corpus[i] for i in order[offset : offset + size]]
                    batch_started = time.perf_counter()
                    loss, grad_norm = self.train_batch(examples)
                    losses.append(loss)
                    norms.append(grad_norm)
                    if self._observer:
                        self._observer.on_batch(BatchReport(epoch, batch_index, loss, grad_norm, time.perf_counter() - batch_started))
            except TrainingDivergedError:
                logger.error("Training diverged in epoch %s; restoring parameters of epoch %s", epoch, last_good.epoch)
                self.restore(last_good)
                raise
            report = EpochReport(
                epoch=epoch,
                mean_loss=sum(losses) / len(losses),
                grad_norm=sum(norms) / len(norms),
                wall_time_s=time.perf_counter() - started,
                optimizer_steps=self._optimizer.step_count,
            )
            logger.info(
                "Epoch %s: mean loss %.3f dB, grad norm %.3g, %.1f s",
                epoch,
                report.mean_loss,
                report.grad_norm,
                report.wall_time_s,
            )
            reports.append(report)
            last_good = self.snapshot(epoch)
            if self._observer and (epoch % self._settings.checkpoint_every == 0 or epoch == start_epoch + self._settings.epochs):
                self._observer.on_epoch(report, last_good)
        return reports
