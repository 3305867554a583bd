from __future__ import annotations

import logging
from contextlib import asynccontextmanager
from typing import AsyncIterator

import torch

from ..infrastructure.metrics import MetricsClient
from .container import AppConfig, AppContainer, create_container
from .metrics import attach_action_log, detach_action_log

logger = logging.getLogger(__name__)


@asynccontextmanager
async def bootstrap_app(
    config: AppConfig,
    command: str,
    *,
    metrics_client: MetricsClient | None = None,
) -> AsyncIterator[AppContainer]:
    """Wires one CLI command.

    Torch defaults to float64 for the whole command, spans go to the JSONL
    action log when one is configured, and the command itself is recorded as
    a `cli:command` span so failed runs show up in the log with `success=false`.
    """
    previous_dtype = torch.get_default_dtype()
    torch.set_default_dtype(torch.float64)
    container = create_container(config, metrics_client=metrics_client)
    if config.metrics_log_path:
        container.metrics.configure(attach_action_log(config.metrics_log_path))
    try:
        with container.metrics.span("cli:command", extra={"command": command}) as span:
            yield container
            span.extra["argv"] = " ".join(config.argv)
    finally:
        if config.metrics_log_path:
            detach_action_log()
        torch.set_default_dtype(previous_dtype)
        logger.debug("Command %s released", command)


__all__ = ["AppContainer", "bootstrap_app"]
