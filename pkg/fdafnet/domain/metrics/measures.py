from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ..shared.errors import InvalidDimensionError, InvalidInputError

NESD_FLOOR_DB = -120.0
ERLE_CAP_DB = 80.0
ERLE_FLOOR_DB = -80.0
DEFAULT_LAMBDA_ERLE = 0.99
DEFAULT_ERLE_REG = 1e-10


def nesd_zero_padded(w_true_full, w_hat_td) -> float:
    """10 log10(||w - pad(w_hat)||^2 / ||w||^2) against the full-length truth, floored at -120 dB."""
    w_true_full = np.asarray(w_true_full, dtype=np.float64)
    w_hat_td = np.asarray(w_hat_td, dtype=np.float64)
    if w_hat_td.shape[-1] > w_true_full.shape[-1]:
        raise InvalidDimensionError(
            f"estimate has {w_hat_td.shape[-1]} taps, longer than the true response ({w_true_full.shape[-1]})"
        )
    reference = float(np.sum(w_true_full**2))
    if reference <= 0:
        raise InvalidInputError("true response has zero energy")
    padded = np.zeros_like(w_true_full)
    padded[: w_hat_td.shape[-1]] = w_hat_td
    ratio = float(np.sum((w_true_full - padded) ** 2)) / reference
    if ratio <= 0:
        return NESD_FLOOR_DB
    return max(10.0 * math.log10(ratio), NESD_FLOOR_DB)


@dataclass(frozen=True)
class ErleState:
    num: float = 0.0
    den: float = 0.0


def erle_update(
    state: ErleState,
    d_block,
    d_hat_block,
    lambda_erle: float = DEFAULT_LAMBDA_ERLE,
    reg: float = DEFAULT_ERLE_REG,
) -> tuple[ErleState, float]:
    d_block = np.asarray(d_block, dtype=np.float64)
    d_hat_block = np.asarray(d_hat_block, dtype=np.float64)
    if d_block.shape != d_hat_block.shape:
        raise InvalidDimensionError(f"echo blocks differ in shape: {d_block.shape} vs {d_hat_block.shape}")
    num = lambda_erle * state.num + (1.0 - lambda_erle) * float(np.sum(d_block**2))
    den = lambda_erle * state.den + (1.0 - lambda_erle) * float(np.sum((d_block - d_hat_block) ** 2))
    ratio = num / (den + reg)
    value = 10.0 * math.log10(ratio) if ratio > 0 else ERLE_FLOOR_DB
    return ErleState(num=num, den=den), min(max(value, ERLE_FLOOR_DB), ERLE_CAP_DB)


@dataclass(frozen=True, eq=False)
class MetricSeries:
    run_id: str
    block_period_s: float
    nesd_zp_db: np.ndarray
    erle_db: np.ndarray

    def __post_init__(self) -> None:
        if self.nesd_zp_db.shape != self.erle_db.shape:
            raise InvalidDimensionError(
                f"series {self.run_id}: NESD and ERLE lengths differ ({self.nesd_zp_db.shape} vs {self.erle_db.shape})"
            )

    def __len__(self) -> int:
        return int(self.nesd_zp_db.shape[0])

    @property
    def times(self) -> np.ndarray:
        return (np.arange(len(self)) + 1) * self.block_period_s


def aggregate(series: Sequence[np.ndarray]) -> np.ndarray:
    """Per-block arithmetic mean of dB values."""
    if not series:
        raise InvalidInputError("nothing to aggregate")
    lengths = {len(s) for s in series}
    if len(lengths) != 1:
        raise InvalidInputError(f"ragged series lengths: {sorted(lengths)}")
    return np.mean(np.stack([np.asarray(s, dtype=np.float64) for s in series]), axis=0)


def aggregate_runs(runs: Sequence[MetricSeries], run_id: str = "mean") -> MetricSeries:
    if not runs:
        raise InvalidInputError("nothing to aggregate")
    return MetricSeries(
        run_id=run_id,
        block_period_s=runs[0].block_period_s,
        nesd_zp_db=aggregate([r.nesd_zp_db for r in runs]),
        erle_db=aggregate([r.erle_db for r in runs]),
    )


def steady_state_level(values, end_block: int, window: int) -> float:
    """Mean of the `window` blocks preceding `end_block`."""
    values = np.asarray(values, dtype=np.float64)
    start = max(0, end_block - window)
    if end_block <= start or end_block > values.shape[0]:
        raise InvalidInputError(f"no blocks in steady-state window [{start}, {end_block})")
    return float(np.mean(values[start:end_block]))


def reconvergence_blocks(values, switch_block: int, window: int, tolerance_db: float = 3.0) -> Optional[int]:
    """
    Blocks after the switch until the distance is back within `tolerance_db`
    of the pre-switch steady state; None if it never gets there.
    """
    values = np.asarray(values, dtype=np.float64)
    target = steady_state_level(values, switch_block, window) + tolerance_db
    hits = np.nonzero(values[switch_block:] <= target)[0]
    return int(hits[0]) if hits.size else None
