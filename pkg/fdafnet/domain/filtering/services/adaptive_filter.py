from __future__ import annotations

import torch

from ...shared.errors import InvalidInputError, UpdateRejectedError
from ...shared.models import FilterDims
from ...spectral import as_real, enforce_fir_constraint, overlap_save_convolve, require_length, zero_pad_block
from ..models import FilterState


def prior_error(state: FilterState, x_spec: torch.Tensor, y_block, dims: FilterDims) -> tuple[torch.Tensor, torch.Tensor]:
    """
    Echo estimate with the previous filter and the DFT of the zero-front-padded prior error.
    Returns (e_spec, d_hat).
    """
    y_block = as_real(y_block)
    require_length(y_block, dims.hop, "observation block")
    d_hat = overlap_save_convolve(x_spec, state.w_hat, dims)
    e_spec = zero_pad_block(y_block - d_hat, dims)
    return e_spec, d_hat


def _all_finite(*tensors: torch.Tensor) -> bool:
    return all(bool(torch.isfinite(t).all()) for t in tensors)


def update(
    state: FilterState,
    step: torch.Tensor,
    x_spec: torch.Tensor,
    e_spec: torch.Tensor,
    dims: FilterDims,
) -> FilterState:
    """
    Constrained gradient step w <- w + Q3 (step * conj(x) * e).

    A batch is updated atomically: one non-finite element rejects the whole
    batch and every element keeps its previous estimate.
    """
    require_length(step, dims.fft_size, "step-size diagonal")
    require_length(x_spec, dims.fft_size, "input spectrum")
    require_length(e_spec, dims.fft_size, "error spectrum")
    if not _all_finite(step, x_spec, e_spec):
        raise UpdateRejectedError(
            f"non-finite update inputs at block {state.block_index + 1}",
            state=state.flagged(),
        )
    if bool((step.detach() < 0).any()):
        raise InvalidInputError("step-sizes must be non-negative")
    gradient = step * x_spec.conj() * e_spec
    return FilterState(
        w_hat=state.w_hat + enforce_fir_constraint(gradient, dims),
        block_index=state.block_index + 1,
        rejected_updates=state.rejected_updates,
    )
