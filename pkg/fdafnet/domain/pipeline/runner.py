from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Optional

import torch

from ..control import ControllerState, StepSizeController
from ..filtering import FilterState, prior_error, update
from ..shared.errors import InvalidDimensionError, TrainingDivergedError, UpdateRejectedError
from ..shared.models import FilterDims, MaskPair
from ..spectral import REAL_DTYPE, analyze, as_real

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class StreamState:
    filter: FilterState
    controller: ControllerState

    def detached(self) -> "StreamState":
        return StreamState(filter=self.filter.detached(), controller=self.controller.detached())


@dataclass(frozen=True)
class BlockResult:
    index: int
    x_spec: torch.Tensor
    e_spec: torch.Tensor
    d_hat: torch.Tensor
    error: torch.Tensor
    step: torch.Tensor
    masks: Optional[MaskPair]
    state: StreamState
    rejected: bool = False


@dataclass(frozen=True)
class StreamOutput:
    state: StreamState
    d_hat: torch.Tensor
    error: torch.Tensor


BlockCallback = Callable[[BlockResult], None]


class StreamRunner:
    """
    Один блок алгоритма: анализ кадра, априорная ошибка, шаг контроллера,
    обновление фильтра. Один и тот же код работает при обучении (с графом
    autograd) и при инференсе (под no_grad у вызывающей стороны).
    """

    def __init__(self, controller: StepSizeController, dims: FilterDims, *, strict: bool = False):
        self.controller = controller
        self.dims = dims
        self.strict = strict

    def initial_state(self, batch_shape: tuple[int, ...] = ()) -> StreamState:
        return StreamState(
            filter=FilterState.zeros(self.dims, batch_shape),
            controller=self.controller.initial_state(batch_shape),
        )

    def process_block(self, state: StreamState, frame: torch.Tensor, y_block: torch.Tensor) -> BlockResult:
        index = state.filter.block_index
        x_spec = analyze(frame, self.dims)
        e_spec, d_hat = prior_error(state.filter, x_spec, y_block, self.dims)
        decision = self.controller.compute(state.controller, x_spec, e_spec)
        try:
            filt = update(state.filter, decision.step, x_spec, e_spec, self.dims)
        except UpdateRejectedError as exc:
            if self.strict:
                raise TrainingDivergedError("update rejected", block_index=index) from exc
            logger.warning("Block %s: %s; keeping previous estimate", index, exc)
            rejected = exc.state
            kept = FilterState(
                w_hat=rejected.w_hat,
                block_index=rejected.block_index + 1,
                rejected_updates=rejected.rejected_updates,
            )
            new_state = StreamState(filter=kept, controller=state.controller)
            return BlockResult(
                index=index,
                x_spec=x_spec,
                e_spec=e_spec,
                d_hat=d_hat,
                error=as_real(y_block) - d_hat,
                step=decision.step,
                masks=decision.masks,
                state=new_state,
                rejected=True,
            )
        controller_state = self.controller.observe_update(decision.state, decision.step, x_spec, filt.w_hat, e_spec)
        return BlockResult(
            index=index,
            x_spec=x_spec,
            e_spec=e_spec,
            d_hat=d_hat,
            error=as_real(y_block) - d_hat,
            step=decision.step,
            masks=decision.masks,
            state=StreamState(filter=filt, controller=controller_state),
        )

    def run(
        self,
        frames: torch.Tensor,
        blocks: torch.Tensor,
        *,
        state: StreamState | None = None,
        on_block: BlockCallback | None = None,
        detach_every: int = 0,
    ) -> StreamOutput:
        """
        frames: (..., T, M) input frames, blocks: (..., T, R) microphone blocks.
        `detach_every` > 0 cuts the autograd graph every k blocks.
        """
        frames = as_real(frames).to(REAL_DTYPE)
        blocks = as_real(blocks).to(REAL_DTYPE)
        if frames.shape[:-1] != blocks.shape[:-1]:
            raise InvalidDimensionError(
                f"frames {tuple(frames.shape)} and blocks {tuple(blocks.shape)} disagree on batch/block axes"
            )
        total = frames.shape[-2]
        if state is None:
            state = self.initial_state(tuple(frames.shape[:-2]))
        d_hats: list[torch.Tensor] = []
        errors: list[torch.Tensor] = []
        for t in range(total):
            if detach_every > 0 and t > 0 and t % detach_every == 0:
                state = state.detached()
            result = self.process_block(state, frames[..., t, :], blocks[..., t, :])
            state = result.state
            d_hats.append(result.d_hat)
            errors.append(result.error)
            if on_block is not None:
                on_block(result)
        return StreamOutput(state=state, d_hat=torch.stack(d_hats, dim=-2), error=torch.stack(errors, dim=-2))
