from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
import torch

from ...pipeline import BlockResult, StreamRunner
from ...shared.errors import InvalidInputError
from ...spectral import block_signal, frame_signal
from ..measures import DEFAULT_LAMBDA_ERLE, ErleState, MetricSeries, erle_update, nesd_zero_padded

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class RunEvaluation:
    series: MetricSeries
    mask_means: Optional[np.ndarray]
    rejected_updates: int


class Evaluator:
    """
    Прогоняет контроллер по одному сценарию без графа autograd и считает
    NESD с дополнением нулями и сглаженный ERLE для каждого блока.
    """

    def __init__(self, runner: StreamRunner, *, lambda_erle: float = DEFAULT_LAMBDA_ERLE):
        self._runner = runner
        self._lambda_erle = lambda_erle

    def evaluate(
        self,
        run_id: str,
        *,
        x: np.ndarray,
        y: np.ndarray,
        d: np.ndarray,
        air_pre: np.ndarray,
        air_post: np.ndarray,
        switch_block: int,
        sample_rate: int,
    ) -> RunEvaluation:
        if not (len(x) == len(y) == len(d)):
            raise InvalidInputError(f"run {run_id}: tracks differ in length ({len(x)}, {len(y)}, {len(d)})")
        dims = self._runner.dims
        frames = frame_signal(torch.as_tensor(np.asarray(x, dtype=np.float64)), dims)
        blocks = block_signal(torch.as_tensor(np.asarray(y, dtype=np.float64)), dims)
        echo_blocks = np.asarray(d, dtype=np.float64)[: blocks.shape[0] * dims.hop].reshape(-1, dims.hop)

        nesd_values: list[float] = []
        erle_values: list[float] = []
        masks: list[tuple[float, float]] = []
        erle_state = ErleState()

        def on_block(result: BlockResult) -> None:
            nonlocal erle_state
            air = air_post if result.index >= switch_block else air_pre
            w_td = result.state.filter.impulse_response(dims).numpy()
            nesd_values.append(nesd_zero_padded(air, w_td))
            erle_state, erle_db = erle_update(
                erle_state, echo_blocks[result.index], result.d_hat.numpy(), self._lambda_erle
            )
            erle_values.append(erle_db)
            if result.masks is not None:
                masks.append((float(result.masks.m_mu.mean()), float(result.masks.m_e.mean())))

        with torch.no_grad():
            output = self._runner.run(frames, blocks, on_block=on_block)

        rejected = output.state.filter.rejected_updates
        if rejected:
            logger.warning("Run %s: %s updates rejected", run_id, rejected)
        series = MetricSeries(
            run_id=run_id,
            block_period_s=dims.hop / sample_rate,
            nesd_zp_db=np.asarray(nesd_values),
            erle_db=np.asarray(erle_values),
        )
        mask_means = np.asarray(masks) if masks else None
        return RunEvaluation(series=series, mask_means=mask_means, rejected_updates=rejected)
