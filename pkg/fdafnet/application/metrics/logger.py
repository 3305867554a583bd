from __future__ import annotations

import logging
from logging.handlers import TimedRotatingFileHandler
from pathlib import Path

ACTION_LOGGER = "fdafnet.actions"


class ActionLogHandler(TimedRotatingFileHandler):
    """Daily-rotated JSONL sink; recreates the file and its directory if they vanish mid-run."""

    def emit(self, record):
        target = Path(self.baseFilename)
        if self.stream and not target.exists():
            target.parent.mkdir(parents=True, exist_ok=True)
            try:
                self.stream.close()
            except OSError:
                pass
            self.stream = self._open()
        super().emit(record)


def attach_action_log(
    path: str | Path,
    *,
    when: str = "midnight",
    backups: int = 14,
    logger_name: str = ACTION_LOGGER,
) -> logging.Logger:
    """Routes `MetricsClient` spans (`process:block`, `train:epoch`, ...) to `path`, one JSON object per line."""
    target = Path(path).resolve()
    logger = logging.getLogger(logger_name)
    logger.setLevel(logging.INFO)
    logger.propagate = False

    for handler in logger.handlers[:]:
        if isinstance(handler, ActionLogHandler) and Path(handler.baseFilename) == target:
            return logger
        logger.removeHandler(handler)
        handler.close()

    target.parent.mkdir(parents=True, exist_ok=True)
    handler = ActionLogHandler(filename=target, when=when, backupCount=backups, encoding="utf-8", delay=True)
    handler.setFormatter(logging.Formatter("%(message)s"))
    logger.addHandler(handler)
    return logger


def detach_action_log(logger_name: str = ACTION_LOGGER) -> None:
    logger = logging.getLogger(logger_name)
    for handler in logger.handlers[:]:
        handler.flush()
        logger.removeHandler(handler)
        handler.close()
    logger.propagate = True
