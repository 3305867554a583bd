from __future__ import annotations

import json
import logging
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Any, Iterator


@dataclass
class SpanRecord:
    action: str
    duration_ms: float = 0.0
    success: bool = True
    extra: dict[str, Any] = field(default_factory=dict)


class MetricsClient:
    """Timing spans written as JSON lines to the `fdafnet.actions` logger."""

    def __init__(self, logger: logging.Logger | None = None):
        self._logger = logger or logging.getLogger("fdafnet.actions")

    def configure(self, logger: logging.Logger | None = None) -> None:
        if logger:
            self._logger = logger

    def _emit(self, record: SpanRecord, *, source: str | None) -> None:
        payload: dict[str, Any] = {
            "ts": datetime.now(timezone.utc).isoformat(),
            "action": record.action,
            "duration_ms": round(record.duration_ms, 3),
            "success": record.success,
        }
        if source:
            payload["source"] = source
        payload.update(record.extra)
        self._logger.info(json.dumps(payload, ensure_ascii=False))

    def record(self, action: str, duration_ms: float, *, success: bool = True, source: str | None = None, extra: dict | None = None) -> None:
        self._emit(SpanRecord(action=action, duration_ms=duration_ms, success=success, extra=dict(extra or {})), source=source)

    @contextmanager
    def span(self, action: str, *, source: str | None = None, extra: dict | None = None) -> Iterator[SpanRecord]:
        record = SpanRecord(action=action, extra=dict(extra or {}))
        start = time.perf_counter()
        try:
            yield record
        except Exception:
            record.success = False
            raise
        finally:
            record.duration_ms = (time.perf_counter() - start) * 1000
            self._emit(record, source=source)


metrics = MetricsClient()
