"""
DFT machinery of the overlap-save filter.

All selection/padding matrices of the block model are realised as slicing and
zero filling on the last tensor axis; leading axes are batch axes.
"""
from __future__ import annotations

import torch

from ..shared.errors import InvalidDimensionError
from ..shared.models import FilterDims

REAL_DTYPE = torch.float64
COMPLEX_DTYPE = torch.complex128


def require_length(tensor: torch.Tensor, length: int, name: str) -> None:
    if tensor.dim() == 0 or tensor.shape[-1] != length:
        shape = tuple(tensor.shape)
        raise InvalidDimensionError(f"{name}: expected last dimension {length}, got shape {shape}")


def as_real(values) -> torch.Tensor:
    if isinstance(values, torch.Tensor):
        return values if values.is_floating_point() else values.to(REAL_DTYPE)
    return torch.as_tensor(values, dtype=REAL_DTYPE)


def as_complex(values) -> torch.Tensor:
    if isinstance(values, torch.Tensor):
        return values if values.is_complex() else values.to(COMPLEX_DTYPE)
    return torch.as_tensor(values, dtype=COMPLEX_DTYPE)


def analyze(frame, dims: FilterDims) -> torch.Tensor:
    frame = as_real(frame)
    require_length(frame, dims.fft_size, "input frame")
    return torch.fft.fft(frame, dim=-1)


def synthesize(spectrum, dims: FilterDims) -> torch.Tensor:
    spectrum = as_complex(spectrum)
    require_length(spectrum, dims.fft_size, "spectrum")
    return torch.fft.ifft(spectrum, dim=-1).real


def power(spectrum: torch.Tensor) -> torch.Tensor:
    """|s[m]|^2, written without abs() so the derivative stays finite at zero."""
    return spectrum.real.square() + spectrum.imag.square()


def enforce_fir_constraint(w, dims: FilterDims) -> torch.Tensor:
    """Projects a frequency response onto L-tap FIR filters zero-padded to M."""
    w = as_complex(w)
    require_length(w, dims.fft_size, "frequency response")
    taps = torch.fft.ifft(w, dim=-1)
    kept = taps[..., : dims.filter_length]
    tail = torch.zeros(kept.shape[:-1] + (dims.hop,), dtype=taps.dtype, device=taps.device)
    return torch.fft.fft(torch.cat((kept, tail), dim=-1), dim=-1)


def select_nonredundant(spectrum, dims: FilterDims) -> torch.Tensor:
    spectrum = as_complex(spectrum) if not isinstance(spectrum, torch.Tensor) else spectrum
    require_length(spectrum, dims.fft_size, "spectrum")
    return spectrum[..., : dims.bins]


def mirror_to_full(half, dims: FilterDims) -> torch.Tensor:
    """
    Rebuilds the M-bin conjugate-symmetric vector from its M/2+1 leading bins.
    Real inputs (masks, PSDs) are mirrored without conjugation.
    """
    half = half if isinstance(half, torch.Tensor) else torch.as_tensor(half)
    require_length(half, dims.bins, "half spectrum")
    upper = torch.flip(half[..., 1 : dims.fft_size // 2], dims=(-1,))
    if upper.is_complex():
        upper = upper.conj()
    return torch.cat((half, upper), dim=-1)
