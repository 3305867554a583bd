from __future__ import annotations

from dataclasses import dataclass, replace

import torch

from ...shared.models import FilterDims
from ...spectral import COMPLEX_DTYPE


@dataclass(frozen=True)
class FilterState:
    w_hat: torch.Tensor
    block_index: int = 0
    rejected_updates: int = 0

    @classmethod
    def zeros(cls, dims: FilterDims, batch_shape: tuple[int, ...] = ()) -> "FilterState":
        return cls(w_hat=torch.zeros(batch_shape + (dims.fft_size,), dtype=COMPLEX_DTYPE))

    def impulse_response(self, dims: FilterDims) -> torch.Tensor:
        """Time-domain estimate: the first L taps of the inverse DFT."""
        return torch.fft.ifft(self.w_hat, dim=-1).real[..., : dims.filter_length]

    def flagged(self) -> "FilterState":
        return replace(self, rejected_updates=self.rejected_updates + 1)

    def detached(self) -> "FilterState":
        return replace(self, w_hat=self.w_hat.detach())
