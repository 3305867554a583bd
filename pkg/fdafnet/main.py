import argparse
import asyncio
import logging
import os
import sys

from dotenv import load_dotenv

from .application.bootstrap import bootstrap_app
from .application.container import AppConfig
from .application.workflow import FdafWorkflow
from .domain.shared import (
    FdafError,
    InvalidConfigError,
    InvalidDimensionError,
    InvalidInputError,
    TrainingDivergedError,
)
from .infrastructure.config_loader import load_run_config

load_dotenv()
logging.basicConfig(
    level=os.getenv("LOG_LEVEL", "INFO").upper(),
    format="%(asctime)s %(levelname)s [%(name)s] %(message)s",
)
logger = logging.getLogger(__name__)

EXIT_FAILURE = 1
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_DIVERGED = 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fdafnet",
        description="Frequency-domain adaptive filtering with learned step-size control",
    )
    parser.add_argument("--config", default=os.getenv("FDAFNET_CONFIG") or None, help="YAML run configuration")
    parser.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="SECTION.KEY=VALUE",
        help="override one configuration value (YAML syntax), repeatable",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    simulate = commands.add_parser("simulate", help="generate synthetic scenarios")
    simulate.add_argument("--count", type=int, required=True)
    simulate.add_argument("--out", required=True)
    simulate.add_argument("--split", choices=("train", "test"), default="train")

    train = commands.add_parser("train", help="train the mask network end to end")
    source = train.add_mutually_exclusive_group(required=True)
    source.add_argument("--scenarios", help="directory written by `simulate`")
    source.add_argument("--on-the-fly", action="store_true", help="generate training.scenario_count scenarios in memory")
    train.add_argument("--out", required=True, help="checkpoint path")
    train.add_argument("--resume", help="continue from this checkpoint")
    train.add_argument("--log", help="append epoch results to this CSV")

    evaluate = commands.add_parser("eval", help="compare controllers on a scenario set")
    evaluate.add_argument("--scenarios", required=True)
    evaluate.add_argument("--out", required=True)
    evaluate.add_argument("--controllers", help="comma-separated names, default eval.controllers")
    evaluate.add_argument("--checkpoint", dest="checkpoints", action="append", default=[])

    process = commands.add_parser("process", help="stream a recording through one controller")
    process.add_argument("--x", required=True, help="far-end input WAV")
    process.add_argument("--y", required=True, help="microphone WAV")
    process.add_argument("--out", required=True, help="output prefix")
    process.add_argument("--controller")
    process.add_argument("--checkpoint")
    process.add_argument("--truth-air", help="true AIR (.f64 or .wav) for NESD_ZP tracking")
    process.add_argument("--echo", help="echo-only track used as ERLE reference")

    inspect = commands.add_parser("inspect-checkpoint", help="print checkpoint metadata and tensor shapes")
    inspect.add_argument("checkpoint")
    return parser


def load_app_config(args: argparse.Namespace, argv: list[str]) -> AppConfig:
    run = load_run_config(args.config, args.overrides)
    workers_raw = os.getenv("FDAFNET_WORKERS", "").strip()
    try:
        workers = int(workers_raw) if workers_raw else None
    except ValueError as exc:
        raise InvalidConfigError(f"FDAFNET_WORKERS must be an integer, got {workers_raw!r}") from exc
    config = AppConfig(
        run=run,
        metrics_log_path=os.getenv("METRICS_LOG_PATH", "data/metrics/actions.log").strip() or None,
        workers=workers,
        config_path=args.config,
        argv=tuple(argv),
    )
    logger.info(
        "Config loaded: file=%s, overrides=%s, M=%s, R=%s, controller=%s, variant=%s, metrics_log=%s",
        args.config or "defaults",
        len(args.overrides),
        run.filter.fft_size,
        run.filter.hop,
        run.controller.name,
        run.training.variant,
        config.metrics_log_path,
    )
    return config


async def run_command(args: argparse.Namespace, config: AppConfig) -> None:
    async with bootstrap_app(config, args.command) as container:
        workflow = FdafWorkflow(container)
        if args.command == "simulate":
            await workflow.simulate(args.count, args.out, split=args.split)
        elif args.command == "train":
            result = await workflow.train(args.out, scenarios_dir=args.scenarios, resume=args.resume, log_path=args.log)
            if result.epochs:
                last = result.epochs[-1]
                logger.info("Training finished at epoch %s, loss %.3f dB", last.epoch, last.mean_loss)
            print(f"checkpoint: {result.checkpoint}")
        elif args.command == "eval":
            controllers = [c.strip() for c in args.controllers.split(",") if c.strip()] if args.controllers else None
            result = await workflow.evaluate(args.scenarios, args.out, controllers=controllers, checkpoints=args.checkpoints)
            print((result.out_dir / "summary.md").read_text(encoding="utf-8"))
        elif args.command == "process":
            report = await workflow.process(
                args.x,
                args.y,
                args.out,
                controller=args.controller,
                checkpoint=args.checkpoint,
                truth_air=args.truth_air,
                echo=args.echo,
            )
            print(container.presenter.process_text(report))
        elif args.command == "inspect-checkpoint":
            print(await workflow.inspect_checkpoint(args.checkpoint))


def exit_code_for(exc: FdafError) -> int:
    if isinstance(exc, InvalidConfigError):
        return EXIT_CONFIG
    if isinstance(exc, (InvalidInputError, InvalidDimensionError)):
        return EXIT_DATA
    if isinstance(exc, TrainingDivergedError):
        return EXIT_DIVERGED
    return EXIT_FAILURE


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    try:
        config = load_app_config(args, argv)
        logger.info("Running %s", args.command)
        asyncio.run(run_command(args, config))
    except FdafError as exc:
        logger.error("%s failed: %s", args.command, exc)
        return exit_code_for(exc)
    except OSError as exc:
        logger.error("%s failed on file access: %s", args.command, exc)
        return EXIT_DATA
    except KeyboardInterrupt:
        logger.info("Interrupted by user, shutting down")
        return EXIT_FAILURE
    return 0


if __name__ == "__main__":
    sys.exit(main())
