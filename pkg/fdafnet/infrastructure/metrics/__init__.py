from .jsonl import MetricsClient, SpanRecord, metrics

__all__ = ["MetricsClient", "SpanRecord", "metrics"]
