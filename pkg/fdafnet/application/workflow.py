from __future__ import annotations

import asyncio
import logging
import statistics
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np
import torch

from ..domain.control import requires_network
from ..domain.metrics import (
    ErleState,
    Evaluator,
    MetricSeries,
    RunEvaluation,
    aggregate_runs,
    erle_update,
    nesd_zero_padded,
    reconvergence_blocks,
    steady_state_level,
)
from ..domain.neural import MaskNetwork, NormalizationStats, estimate_normalization
from ..domain.scenario import SPLITS, TRAIN_SPLIT, Scenario
from ..domain.shared import InvalidConfigError, InvalidInputError
from ..domain.spectral import FrameBuffer
from ..domain.training import (
    AdamOptimizer,
    BatchReport,
    EpochReport,
    Trainer,
    TrainingExample,
    TrainingSnapshot,
)
from ..infrastructure.audio import read_mono, write_mono
from ..infrastructure.checkpoint import Checkpoint, read_checkpoint, write_checkpoint
from ..infrastructure.manifest import build_manifest, write_manifest
from ..infrastructure.mappers import (
    checkpoint_from_training,
    checkpoint_summary,
    network_from_checkpoint,
    optimizer_state_from_checkpoint,
)
from ..infrastructure.random import NumpyRandomizer
from ..infrastructure.storage import (
    ScenarioDirectory,
    TrainingLogCsv,
    read_f64,
    write_mask_means,
    write_metric_series,
)
from .container import AppContainer
from .presenters import ControllerSummary, ProcessReport

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TrainResult:
    checkpoint: Path
    epochs: tuple[EpochReport, ...]
    start_epoch: int


@dataclass(frozen=True)
class EvalResult:
    out_dir: Path
    summaries: tuple[ControllerSummary, ...]


class _CheckpointObserver:
    """Writes the checkpoint and the CSV log after every reported epoch."""

    def __init__(self, workflow: "FdafWorkflow", *, network, stats, variant: str, out: Path, log: TrainingLogCsv | None):
        self._workflow = workflow
        self._network = network
        self._stats = stats
        self._variant = variant
        self._out = out
        self._log = log

    def on_batch(self, report: BatchReport) -> None:
        self._workflow.container.metrics.record(
            "train:batch",
            report.wall_time_s * 1000,
            extra={"epoch": report.epoch, "batch": report.batch_index, "loss_db": round(report.loss, 4)},
        )

    def on_epoch(self, report: EpochReport, snapshot: TrainingSnapshot) -> None:
        self._workflow.container.metrics.record(
            "train:epoch",
            report.wall_time_s * 1000,
            extra={"epoch": report.epoch, "loss_db": round(report.mean_loss, 4)},
        )
        self._workflow.save_checkpoint(
            self._out,
            self._network,
            self._stats,
            variant=self._variant,
            epoch=snapshot.epoch,
            optimizer=snapshot.optimizer,
        )
        if self._log is not None:
            self._log.append(report)


@dataclass
class FdafWorkflow:
    container: AppContainer

    @property
    def run(self):
        return self.container.config.run

    def _manifest(self, path: Path, command: str, **extra) -> None:
        manifest = build_manifest(
            self.run,
            command=command,
            argv=self.container.config.argv or None,
            seeds={"scenario": self.run.scenario.seed, "training": self.run.training.seed},
            extra=extra or None,
        )
        write_manifest(path, manifest)

    def _scenario_directory(self, root: str | Path) -> ScenarioDirectory:
        return ScenarioDirectory(root, dims=self.run.dims, sample_rate=self.run.scenario.sample_rate)

    # simulate

    def _simulate(self, count: int, out_dir: Path, split: int) -> list[Path]:
        directory = ScenarioDirectory(out_dir)
        written = []
        for index in range(count):
            with self.container.metrics.span("simulate:scenario", extra={"index": index, "split": split}):
                scenario = self.container.scenario_builder.build(index, split)
                written.append(directory.save(scenario, filter_length=self.run.dims.filter_length))
        return written

    async def simulate(self, count: int, out_dir: str | Path, *, split: str = "train") -> list[Path]:
        if count < 1:
            raise InvalidConfigError(f"--count must be >= 1, got {count}")
        if split not in SPLITS:
            raise InvalidConfigError(f"unknown split {split!r}, expected one of {sorted(SPLITS)}")
        out = Path(out_dir)
        written = await asyncio.to_thread(self._simulate, count, out, SPLITS[split])
        self._manifest(out / "manifest.json", "simulate", count=count, split=split)
        logger.info("Wrote %s scenarios to %s", len(written), out)
        return written

    # train

    def _training_scenarios(self, scenarios_dir: str | Path | None) -> list[Scenario]:
        if scenarios_dir is not None:
            return self._scenario_directory(scenarios_dir).load_all()
        count = self.run.training.scenario_count
        logger.info("Generating %s training scenarios on the fly", count)
        return list(self.container.scenario_builder.build_many(count, TRAIN_SPLIT))

    def _examples(self, scenarios: Sequence[Scenario]) -> list[TrainingExample]:
        dims = self.run.dims
        max_blocks = self.run.training.max_blocks
        return [
            TrainingExample.from_signals(s.x, s.y, s.air_pre, s.air_post, s.switch_block, dims, max_blocks=max_blocks)
            for s in scenarios
        ]

    def _new_network(self) -> MaskNetwork:
        with torch.random.fork_rng():
            torch.manual_seed(self.run.training.seed)
            network = MaskNetwork.for_dims(self.run.dims, self.run.network.hidden_size)
        return network.to(torch.float64)

    def save_checkpoint(
        self,
        path: Path,
        network: MaskNetwork,
        stats: NormalizationStats,
        *,
        variant: str,
        epoch: int,
        optimizer=None,
    ) -> Path:
        checkpoint = checkpoint_from_training(
            network,
            stats,
            self.run.dims,
            variant=variant,
            epoch=epoch,
            seed=self.run.training.seed,
            optimizer=optimizer,
        )
        return write_checkpoint(path, checkpoint)

    def _train(
        self,
        out: Path,
        scenarios_dir: str | Path | None,
        resume: str | Path | None,
        log_path: str | Path | None,
    ) -> TrainResult:
        section = self.run.training
        dims = self.run.dims
        examples = self._examples(self._training_scenarios(scenarios_dir))

        start_epoch = 0
        optimizer_state = None
        if resume is not None:
            checkpoint = read_checkpoint(resume)
            if checkpoint.meta.get("variant") != section.variant:
                raise InvalidConfigError(
                    f"checkpoint variant {checkpoint.meta.get('variant')!r} differs from training.variant {section.variant!r}"
                )
            network, stats = network_from_checkpoint(checkpoint, dims=dims)
            optimizer_state = optimizer_state_from_checkpoint(checkpoint, section.adam())
            start_epoch = int(checkpoint.meta.get("epoch", 0))
            logger.info("Resuming from %s at epoch %s", resume, start_epoch)
        else:
            stats = estimate_normalization(
                ((e.frames, e.blocks) for e in examples),
                dims,
                eps=self.run.network.feature_eps,
                sigma_floor=self.run.network.sigma_floor,
            )
            network = self._new_network()
        network.train()

        optimizer = AdamOptimizer(list(network.parameters()), section.adam())
        if optimizer_state is not None:
            optimizer.load_state(optimizer_state)
        if resume is None:
            self.save_checkpoint(out, network, stats, variant=section.variant, epoch=0, optimizer=optimizer.state())

        estimator = self.container.controllers.mask_estimator(network, stats)
        runner = self.container.controllers.runner(section.variant, mask_model=estimator, strict=True)
        log = TrainingLogCsv(log_path) if log_path else None
        trainer = Trainer(
            network=network,
            runner=runner,
            optimizer=optimizer,
            randomizer=NumpyRandomizer.from_seed([section.seed, start_epoch]),
            settings=section.settings(),
            observer=_CheckpointObserver(self, network=network, stats=stats, variant=section.variant, out=out, log=log),
        )
        logger.info(
            "Training %s on %s scenarios: %s epochs, batch %s, %s parameters",
            section.variant,
            len(examples),
            section.epochs,
            section.batch_size,
            sum(p.numel() for p in network.parameters()),
        )
        reports = trainer.train(examples, start_epoch=start_epoch)
        if not reports:
            self.save_checkpoint(
                out, network, stats, variant=section.variant, epoch=start_epoch, optimizer=optimizer.state()
            )
        return TrainResult(checkpoint=out, epochs=tuple(reports), start_epoch=start_epoch)

    async def train(
        self,
        out: str | Path,
        *,
        scenarios_dir: str | Path | None = None,
        resume: str | Path | None = None,
        log_path: str | Path | None = None,
    ) -> TrainResult:
        out = Path(out)
        result = await asyncio.to_thread(self._train, out, scenarios_dir, resume, log_path)
        self._manifest(
            out.with_name(out.name + ".manifest.json"),
            "train",
            scenarios=str(scenarios_dir) if scenarios_dir else "on-the-fly",
            resume=str(resume) if resume else None,
        )
        return result

    # eval

    def _load_checkpoints(self, paths: Sequence[str | Path]) -> dict[str, Checkpoint]:
        by_variant: dict[str, Checkpoint] = {}
        for path in paths:
            checkpoint = read_checkpoint(path)
            variant = checkpoint.meta.get("variant")
            if not isinstance(variant, str):
                raise InvalidConfigError(f"checkpoint {path} does not record its controller variant")
            if variant in by_variant:
                raise InvalidConfigError(f"two checkpoints given for variant {variant!r}")
            by_variant[variant] = checkpoint
        return by_variant

    def _mask_models(self, controllers: Sequence[str], checkpoint_paths: Sequence[str | Path]) -> dict[str, object]:
        checkpoints = self._load_checkpoints(checkpoint_paths)
        models: dict[str, object] = {}
        for name in controllers:
            if not requires_network(name):
                continue
            checkpoint = checkpoints.get(name)
            if checkpoint is None:
                raise InvalidConfigError(f"controller '{name}' needs a checkpoint trained for that variant")
            network, stats = network_from_checkpoint(checkpoint, dims=self.run.dims, dtype=self.run.network.dtype)
            models[name] = (network, stats)
        return models

    def _evaluate_pair(self, name: str, model, scenario: Scenario, run_id: str) -> RunEvaluation:
        mask_model = self.container.controllers.mask_estimator(*model) if model else None
        runner = self.container.controllers.runner(name, mask_model=mask_model)
        evaluator = Evaluator(runner, lambda_erle=self.run.metrics.lambda_erle)
        with self.container.metrics.span("eval:run", source=name, extra={"run": run_id}):
            return evaluator.evaluate(
                run_id,
                x=scenario.x,
                y=scenario.y,
                d=scenario.d,
                air_pre=scenario.air_pre,
                air_post=scenario.air_post,
                switch_block=scenario.switch_block,
                sample_rate=scenario.sample_rate,
            )

    def _summarize(self, name: str, runs: Sequence[RunEvaluation], scenarios: Sequence[Scenario]) -> ControllerSummary:
        section = self.run.metrics
        window = section.steady_state_window
        steady, final, erle, reconv = [], [], [], []
        missed = 0
        for run, scenario in zip(runs, scenarios):
            values = run.series.nesd_zp_db
            steady.append(steady_state_level(values, scenario.switch_block, window))
            final.append(steady_state_level(values, len(values), window))
            erle.append(float(np.mean(run.series.erle_db)))
            blocks = reconvergence_blocks(values, scenario.switch_block, window, section.reconvergence_tolerance_db)
            if blocks is None:
                missed += 1
            else:
                reconv.append(blocks)
        return ControllerSummary(
            controller=name,
            runs=len(runs),
            steady_state_db=float(np.mean(steady)),
            final_db=float(np.mean(final)),
            mean_erle_db=float(np.mean(erle)),
            reconvergence_blocks=float(statistics.median(reconv)) if reconv else None,
            not_reconverged=missed,
            rejected_updates=sum(r.rejected_updates for r in runs),
        )

    async def evaluate(
        self,
        scenarios_dir: str | Path,
        out_dir: str | Path,
        *,
        controllers: Sequence[str] | None = None,
        checkpoints: Sequence[str | Path] = (),
    ) -> EvalResult:
        names = list(controllers or self.run.eval.controllers)
        models = self._mask_models(names, checkpoints)
        directory = self._scenario_directory(scenarios_dir)
        paths = directory.list()
        if not paths:
            raise InvalidInputError(f"no scenarios under {scenarios_dir}")
        scenarios = [directory.load(p) for p in paths]
        run_ids = [p.name for p in paths]
        out = Path(out_dir)

        workers = max(1, self.container.config.workers or self.run.eval.workers)
        limiter = asyncio.Semaphore(workers)

        async def evaluate_pair(name: str, scenario: Scenario, run_id: str) -> RunEvaluation:
            async with limiter:
                run = await asyncio.to_thread(self._evaluate_pair, name, models.get(name), scenario, run_id)
            target = out / name
            write_metric_series(target / f"{run_id}.csv", run.series)
            if run.mask_means is not None:
                write_mask_means(target / f"{run_id}_masks.csv", run.mask_means, run.series.block_period_s)
            return run

        summaries: list[ControllerSummary] = []
        aggregates: dict[str, Path] = {}
        for name in names:
            runs = await asyncio.gather(*(evaluate_pair(name, s, r) for s, r in zip(scenarios, run_ids)))
            series: list[MetricSeries] = [run.series for run in runs]
            aggregate = aggregate_runs(series, run_id=f"{name}_mean")
            aggregates[name] = write_metric_series(out / name / "aggregate.csv", aggregate)
            summary = self._summarize(name, runs, scenarios)
            summaries.append(summary)
            logger.info(
                "%s: steady %.2f dB, final %.2f dB, reconvergence %s blocks",
                name,
                summary.steady_state_db,
                summary.final_db,
                summary.reconvergence_blocks,
            )

        presenter = self.container.presenter
        block_period = self.run.filter.hop / self.run.scenario.sample_rate
        (out / "summary.md").write_text(
            presenter.summary_markdown(
                summaries,
                block_period_s=block_period,
                steady_state_window=self.run.metrics.steady_state_window,
                tolerance_db=self.run.metrics.reconvergence_tolerance_db,
            ),
            encoding="utf-8",
        )
        if self.run.eval.write_plot:
            relative = {name: path.relative_to(out) for name, path in aggregates.items()}
            (out / "plot.gp").write_text(presenter.gnuplot_script(relative), encoding="utf-8")
        self._manifest(out / "manifest.json", "eval", controllers=names, scenarios=str(scenarios_dir))
        return EvalResult(out_dir=out, summaries=tuple(summaries))

    # process

    def _read_truth(self, path: str | Path) -> np.ndarray:
        p = Path(path)
        if p.suffix.lower() == ".wav":
            air, _ = read_mono(p, sample_rate=self.run.scenario.sample_rate)
            return air
        return read_f64(p)

    def _process(
        self,
        x_path: str | Path,
        y_path: str | Path,
        prefix: Path,
        controller: str,
        checkpoint: str | Path | None,
        truth_air: str | Path | None,
        echo: str | Path | None,
    ) -> ProcessReport:
        rate = self.run.scenario.sample_rate
        dims = self.run.dims
        x, _ = read_mono(x_path, sample_rate=rate)
        y, _ = read_mono(y_path, sample_rate=rate)
        if len(x) != len(y):
            raise InvalidInputError(f"x has {len(x)} samples, y has {len(y)}")
        blocks = len(x) // dims.hop
        if blocks == 0:
            raise InvalidInputError(f"signals shorter than one block ({dims.hop} samples)")

        mask_model = None
        if requires_network(controller):
            if checkpoint is None:
                raise InvalidConfigError(f"controller '{controller}' needs --checkpoint")
            loaded = read_checkpoint(checkpoint)
            if loaded.meta.get("variant") != controller:
                raise InvalidConfigError(f"checkpoint holds variant {loaded.meta.get('variant')!r}, not {controller!r}")
            network, stats = network_from_checkpoint(loaded, dims=dims, dtype=self.run.network.dtype)
            mask_model = self.container.controllers.mask_estimator(network, stats)
        runner = self.container.controllers.runner(controller, mask_model=mask_model)

        truth = self._read_truth(truth_air) if truth_air else None
        d_ref = None
        if echo:
            d_ref, _ = read_mono(echo, sample_rate=rate)
            if len(d_ref) != len(y):
                raise InvalidInputError(f"echo track has {len(d_ref)} samples, y has {len(y)}")

        buffer = FrameBuffer(dims)
        state = runner.initial_state()
        d_hat = np.zeros(blocks * dims.hop)
        durations: list[float] = []
        nesd_values: list[float] = []
        erle_values: list[float] = []
        erle_state = ErleState()
        with torch.no_grad():
            for b in range(blocks):
                segment = slice(b * dims.hop, (b + 1) * dims.hop)
                with self.container.metrics.span("process:block", source=controller, extra={"block": b}) as span:
                    frame = buffer.push(torch.from_numpy(x[segment]))
                    result = runner.process_block(state, frame, torch.from_numpy(y[segment]))
                    state = result.state
                durations.append(span.duration_ms)
                d_hat[segment] = result.d_hat.numpy()
                if truth is not None:
                    nesd_values.append(nesd_zero_padded(truth, state.filter.impulse_response(dims).numpy()))
                    reference = d_ref[segment] if d_ref is not None else y[segment]
                    erle_state, value = erle_update(erle_state, reference, d_hat[segment], self.run.metrics.lambda_erle)
                    erle_values.append(value)

        error = y[: blocks * dims.hop] - d_hat
        outputs = [
            write_mono(prefix.with_name(prefix.name + "_e.wav"), error, rate),
            write_mono(prefix.with_name(prefix.name + "_d_hat.wav"), d_hat, rate),
        ]
        final_nesd = None
        if truth is not None:
            series = MetricSeries(
                run_id=prefix.name,
                block_period_s=dims.hop / rate,
                nesd_zp_db=np.asarray(nesd_values),
                erle_db=np.asarray(erle_values),
            )
            outputs.append(write_metric_series(prefix.with_name(prefix.name + "_metrics.csv"), series))
            final_nesd = nesd_values[-1]
        return ProcessReport(
            blocks=blocks,
            mean_block_ms=float(np.mean(durations)),
            max_block_ms=float(np.max(durations)),
            budget_ms=dims.hop / rate * 1000,
            rejected_updates=state.filter.rejected_updates,
            outputs=tuple(str(p) for p in outputs),
            final_nesd_db=final_nesd,
        )

    async def process(
        self,
        x_path: str | Path,
        y_path: str | Path,
        out_prefix: str | Path,
        *,
        controller: str | None = None,
        checkpoint: str | Path | None = None,
        truth_air: str | Path | None = None,
        echo: str | Path | None = None,
    ) -> ProcessReport:
        name = controller or self.run.controller.name
        prefix = Path(out_prefix)
        prefix.parent.mkdir(parents=True, exist_ok=True)
        report = await asyncio.to_thread(self._process, x_path, y_path, prefix, name, checkpoint, truth_air, echo)
        self._manifest(prefix.with_name(prefix.name + "_manifest.json"), "process", controller=name)
        logger.info("Processed %s blocks, mean %.3f ms per block", report.blocks, report.mean_block_ms)
        return report

    # inspect

    async def inspect_checkpoint(self, path: str | Path) -> str:
        checkpoint = read_checkpoint(path)
        network_from_checkpoint(checkpoint)
        return self.container.presenter.checkpoint_text(checkpoint_summary(checkpoint))


__all__ = ["EvalResult", "FdafWorkflow", "TrainResult"]
