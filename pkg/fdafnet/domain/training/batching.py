from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
import torch

from ..shared.errors import InvalidDimensionError, InvalidInputError
from ..shared.models import FilterDims
from ..spectral import REAL_DTYPE, block_signal, frame_signal
from .loss import TrainingBatch


@dataclass(frozen=True)
class TrainingExample:
    frames: torch.Tensor
    blocks: torch.Tensor
    truth: torch.Tensor

    @property
    def num_blocks(self) -> int:
        return int(self.frames.shape[0])

    @classmethod
    def from_signals(
        cls,
        x: np.ndarray,
        y: np.ndarray,
        air_pre: np.ndarray,
        air_post: np.ndarray,
        switch_block: int,
        dims: FilterDims,
        *,
        max_blocks: int | None = None,
    ) -> "TrainingExample":
        """
        Frames and blocks of one scenario plus the per-block truth: the first
        L taps of the AIR active in that block.
        """
        if len(x) != len(y):
            raise InvalidInputError(f"input and microphone tracks differ in length: {len(x)} vs {len(y)}")
        if len(air_pre) < dims.filter_length or len(air_post) < dims.filter_length:
            raise InvalidDimensionError(f"true AIRs must have at least {dims.filter_length} taps")
        frames = frame_signal(torch.as_tensor(np.asarray(x, dtype=np.float64)), dims)
        blocks = block_signal(torch.as_tensor(np.asarray(y, dtype=np.float64)), dims)
        if max_blocks is not None:
            frames = frames[:max_blocks]
            blocks = blocks[:max_blocks]
        total = frames.shape[0]
        pre = torch.as_tensor(np.asarray(air_pre[: dims.filter_length], dtype=np.float64))
        post = torch.as_tensor(np.asarray(air_post[: dims.filter_length], dtype=np.float64))
        active_post = (torch.arange(total) >= switch_block).unsqueeze(-1)
        truth = torch.where(active_post, post.expand(total, -1), pre.expand(total, -1))
        return cls(frames=frames.contiguous(), blocks=blocks.contiguous(), truth=truth.to(REAL_DTYPE))


def collate(examples: Sequence[TrainingExample]) -> TrainingBatch:
    """Stacks examples into one batch, truncated to the shortest sequence."""
    if not examples:
        raise InvalidInputError("cannot build a batch from zero examples")
    length = min(example.num_blocks for example in examples)
    return TrainingBatch(
        frames=torch.stack([e.frames[:length] for e in examples]),
        blocks=torch.stack([e.blocks[:length] for e in examples]),
        truth=torch.stack([e.truth[:length] for e in examples]),
    )
