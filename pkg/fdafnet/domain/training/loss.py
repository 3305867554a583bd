from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import torch

from ..pipeline import BlockResult, StreamRunner
from ..shared.errors import InvalidDimensionError, InvalidInputError, TrainingDivergedError
from ..spectral import REAL_DTYPE, as_real

UPSILON_FLOOR = 1e-8


def nesd(w_true, w_hat_td) -> torch.Tensor:
    """Linear system distance ||w - w_hat||^2 / ||w||^2 along the last axis."""
    w_true = as_real(w_true).to(REAL_DTYPE)
    w_hat_td = as_real(w_hat_td).to(REAL_DTYPE)
    if w_true.shape[-1] != w_hat_td.shape[-1]:
        raise InvalidDimensionError(
            f"true filter has {w_true.shape[-1]} taps, estimate has {w_hat_td.shape[-1]}"
        )
    reference = w_true.square().sum(dim=-1)
    if bool((reference <= 0).any()):
        raise InvalidInputError("true filter has zero energy")
    return (w_true - w_hat_td).square().sum(dim=-1) / reference


def log_nesd_db(upsilon: torch.Tensor, floor: float = UPSILON_FLOOR) -> torch.Tensor:
    return 10.0 * torch.log10(torch.clamp_min(upsilon, floor))


@dataclass(frozen=True)
class TrainingBatch:
    """
    frames (B, T, M), blocks (B, T, R) and the active truncated truth
    truth (B, T, L) of every block.
    """

    frames: torch.Tensor
    blocks: torch.Tensor
    truth: torch.Tensor

    def __post_init__(self) -> None:
        if self.frames.shape[:-1] != self.blocks.shape[:-1] or self.frames.shape[:-1] != self.truth.shape[:-1]:
            raise InvalidDimensionError(
                "training batch tensors disagree: "
                f"{tuple(self.frames.shape)}, {tuple(self.blocks.shape)}, {tuple(self.truth.shape)}"
            )
        if self.frames.shape[-2] < 1:
            raise InvalidInputError("training sequence needs at least one block")

    @property
    def size(self) -> int:
        return int(self.frames.shape[0]) if self.frames.dim() == 3 else 1

    @property
    def num_blocks(self) -> int:
        return int(self.frames.shape[-2])


@dataclass
class DifferentiableTrace:
    """
    Recorded autograd graph of one sequence. `loss` and `block_losses` keep
    their graph until `gradient` releases it.
    """

    loss: torch.Tensor
    block_losses: torch.Tensor
    parameters: Sequence[torch.nn.Parameter]
    replay_fn: Callable[[], torch.Tensor] = field(repr=False)

    def replay(self) -> torch.Tensor:
        """Re-runs the forward pass with the current parameters, without a graph."""
        with torch.no_grad():
            return self.replay_fn()


def _forward(
    runner: StreamRunner,
    batch: TrainingBatch,
    *,
    truncation: int,
    loss_scale: float,
) -> tuple[torch.Tensor, torch.Tensor]:
    dims = runner.dims
    terms: list[torch.Tensor] = []

    def on_block(result: BlockResult) -> None:
        w_hat_td = result.state.filter.impulse_response(dims)
        upsilon = nesd(batch.truth[..., result.index, :], w_hat_td)
        if not bool(torch.isfinite(upsilon).all()):
            raise TrainingDivergedError("non-finite system distance", block_index=result.index)
        terms.append(log_nesd_db(upsilon))

    runner.run(batch.frames, batch.blocks, on_block=on_block, detach_every=truncation)
    block_losses = torch.stack(terms, dim=-1)
    loss = loss_scale * block_losses.mean()
    if not math.isfinite(float(loss.detach())):
        raise TrainingDivergedError("non-finite loss", block_index=batch.num_blocks - 1)
    return loss, block_losses


def sequence_loss(
    runner: StreamRunner,
    batch: TrainingBatch,
    parameters: Sequence[torch.nn.Parameter],
    *,
    truncation: int = 0,
    loss_scale: float = 1.0,
) -> tuple[torch.Tensor, DifferentiableTrace]:
    """
    Average logarithmic system distance over blocks and batch entries, with
    the autograd trace through masks, PSD recursions, step-sizes and filter
    updates.
    """
    loss, block_losses = _forward(runner, batch, truncation=truncation, loss_scale=loss_scale)

    def replay() -> torch.Tensor:
        return _forward(runner, batch, truncation=truncation, loss_scale=loss_scale)[0]

    trace = DifferentiableTrace(loss=loss, block_losses=block_losses, parameters=list(parameters), replay_fn=replay)
    return loss, trace


def gradient(trace: DifferentiableTrace, *, retain_graph: bool = False) -> torch.Tensor:
    """Flat reverse-mode gradient over every parameter; unused parameters get zeros."""
    params = list(trace.parameters)
    if not trace.loss.requires_grad:
        return torch.cat([torch.zeros_like(p).reshape(-1) for p in params])
    grads = torch.autograd.grad(trace.loss, params, retain_graph=retain_graph, allow_unused=True)
    return torch.cat(
        [(g if g is not None else torch.zeros_like(p)).reshape(-1) for g, p in zip(grads, params)]
    )
