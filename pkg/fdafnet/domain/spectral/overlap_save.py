from __future__ import annotations

import torch

from ..shared.errors import InvalidDimensionError
from ..shared.models import FilterDims
from .transforms import REAL_DTYPE, as_complex, as_real, require_length


def overlap_save_convolve(x_spec, w, dims: FilterDims) -> torch.Tensor:
    """Last R samples of the circular convolution, i.e. the valid linear-convolution block."""
    x_spec = as_complex(x_spec)
    w = as_complex(w)
    require_length(x_spec, dims.fft_size, "input spectrum")
    require_length(w, dims.fft_size, "frequency response")
    circular = torch.fft.ifft(x_spec * w, dim=-1).real
    return circular[..., dims.filter_length :]


def zero_pad_block(block, dims: FilterDims) -> torch.Tensor:
    """DFT of an R-sample block preceded by L zeros."""
    block = as_real(block)
    require_length(block, dims.hop, "time block")
    head = torch.zeros(block.shape[:-1] + (dims.filter_length,), dtype=block.dtype, device=block.device)
    return torch.fft.fft(torch.cat((head, block), dim=-1), dim=-1)


def frame_signal(x, dims: FilterDims) -> torch.Tensor:
    """
    Splits (..., N) into the input frames (..., T, M) with T = N // R.
    Frame t holds samples [(t+1)R - M, (t+1)R); samples before 0 are zero.
    """
    x = as_real(x)
    blocks = x.shape[-1] // dims.hop
    if blocks == 0:
        raise InvalidDimensionError(f"signal of {x.shape[-1]} samples is shorter than one block ({dims.hop})")
    head = torch.zeros(x.shape[:-1] + (dims.filter_length,), dtype=x.dtype, device=x.device)
    padded = torch.cat((head, x[..., : blocks * dims.hop]), dim=-1)
    return padded.unfold(-1, dims.fft_size, dims.hop)


def block_signal(y, dims: FilterDims) -> torch.Tensor:
    y = as_real(y)
    blocks = y.shape[-1] // dims.hop
    return y[..., : blocks * dims.hop].reshape(y.shape[:-1] + (blocks, dims.hop))


class FrameBuffer:
    """
    Shift register for streaming: each push drops the oldest R samples and
    appends the new block, producing the next InputFrame.
    """

    def __init__(self, dims: FilterDims, batch_shape: tuple[int, ...] = ()):
        self._dims = dims
        self._frame = torch.zeros(batch_shape + (dims.fft_size,), dtype=REAL_DTYPE)

    @property
    def frame(self) -> torch.Tensor:
        return self._frame

    def push(self, block) -> torch.Tensor:
        block = as_real(block)
        require_length(block, self._dims.hop, "time block")
        self._frame = torch.cat((self._frame[..., self._dims.hop :], block.to(REAL_DTYPE)), dim=-1)
        return self._frame
