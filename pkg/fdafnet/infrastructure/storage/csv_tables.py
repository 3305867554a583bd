from __future__ import annotations

import csv
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from ...domain.metrics import MetricSeries
from ...domain.training import EpochReport

METRIC_COLUMNS = ("block_index", "time_s", "nesd_zp_db", "erle_db")
MASK_COLUMNS = ("block_index", "time_s", "mean_m_mu", "mean_m_e")
TRAINING_COLUMNS = ("epoch", "mean_loss_db", "grad_norm", "wall_time_s")


def _write(path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(header)
        writer.writerows(rows)
    return path


def write_metric_series(path: str | Path, series: MetricSeries) -> Path:
    rows = (
        (i, f"{t:.6f}", f"{n:.6f}", f"{e:.6f}")
        for i, (t, n, e) in enumerate(zip(series.times, series.nesd_zp_db, series.erle_db))
    )
    return _write(Path(path), METRIC_COLUMNS, rows)


def write_mask_means(path: str | Path, mask_means: np.ndarray, block_period_s: float) -> Path:
    rows = (
        (i, f"{(i + 1) * block_period_s:.6f}", f"{mu:.6f}", f"{e:.6f}")
        for i, (mu, e) in enumerate(mask_means)
    )
    return _write(Path(path), MASK_COLUMNS, rows)


class TrainingLogCsv:
    """Append-only training log: one row per epoch."""

    def __init__(self, path: str | Path):
        self.path = Path(path)

    def append(self, report: EpochReport) -> None:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        new_file = not self.path.exists() or self.path.stat().st_size == 0
        with self.path.open("a", encoding="utf-8", newline="") as f:
            writer = csv.writer(f)
            if new_file:
                writer.writerow(TRAINING_COLUMNS)
            writer.writerow(
                (report.epoch, f"{report.mean_loss:.6f}", f"{report.grad_norm:.6g}", f"{report.wall_time_s:.3f}")
            )

