from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import torch

from ..shared.errors import InvalidDimensionError, InvalidInputError
from ..shared.models import FilterDims
from ..spectral import REAL_DTYPE, analyze, power, require_length, select_nonredundant, zero_pad_block

DEFAULT_FEATURE_EPS = 1e-12
DEFAULT_SIGMA_FLOOR = 1e-6


@dataclass(frozen=True)
class NormalizationStats:
    nu: torch.Tensor
    sigma: torch.Tensor

    def __post_init__(self) -> None:
        if self.nu.shape != self.sigma.shape or self.nu.dim() != 1:
            raise InvalidDimensionError(
                f"normalization vectors must share one dimension, got {tuple(self.nu.shape)} and {tuple(self.sigma.shape)}"
            )
        if bool((self.sigma <= 0).any()):
            raise InvalidInputError("normalization sigma must be strictly positive")

    @classmethod
    def identity(cls, dims: FilterDims) -> "NormalizationStats":
        return cls(
            nu=torch.zeros(dims.feature_size, dtype=REAL_DTYPE),
            sigma=torch.ones(dims.feature_size, dtype=REAL_DTYPE),
        )

    @property
    def size(self) -> int:
        return int(self.nu.shape[0])


def log_power_features(e_spec: torch.Tensor, x_spec: torch.Tensor, dims: FilterDims, eps: float) -> torch.Tensor:
    u_sig = torch.cat((select_nonredundant(e_spec, dims), select_nonredundant(x_spec, dims)), dim=-1)
    return torch.log(torch.clamp_min(power(u_sig), eps))


def compute_features(
    e_spec: torch.Tensor,
    x_spec: torch.Tensor,
    stats: NormalizationStats,
    dims: FilterDims,
    eps: float = DEFAULT_FEATURE_EPS,
) -> torch.Tensor:
    """Normalized natural-log power spectrum of [e; x] over the M/2+1 non-redundant bins."""
    require_length(stats.nu, dims.feature_size, "normalization mean")
    return (log_power_features(e_spec, x_spec, dims, eps) - stats.nu) / stats.sigma


def estimate_normalization(
    corpus: Iterable[tuple[torch.Tensor, torch.Tensor]],
    dims: FilterDims,
    *,
    eps: float = DEFAULT_FEATURE_EPS,
    sigma_floor: float = DEFAULT_SIGMA_FLOOR,
) -> NormalizationStats:
    """
    Mean and population standard deviation of the log-power features over every
    block of the corpus. Items are (x frames (..., M), y blocks (..., R)); the
    error half of the features is taken from the microphone blocks.
    """
    shift: torch.Tensor | None = None
    total = torch.zeros(dims.feature_size, dtype=REAL_DTYPE)
    total_sq = torch.zeros(dims.feature_size, dtype=REAL_DTYPE)
    count = 0
    with torch.no_grad():
        for frames, blocks in corpus:
            x_spec = analyze(frames, dims)
            y_spec = zero_pad_block(blocks, dims)
            feats = log_power_features(y_spec, x_spec, dims, eps).reshape(-1, dims.feature_size)
            if feats.shape[0] == 0:
                continue
            if shift is None:
                shift = feats[0].clone()
            centered = feats - shift
            total += centered.sum(dim=0)
            total_sq += centered.square().sum(dim=0)
            count += feats.shape[0]
    if count == 0 or shift is None:
        raise InvalidInputError("normalization corpus is empty")
    mean_centered = total / count
    variance = torch.clamp_min(total_sq / count - mean_centered.square(), 0.0)
    sigma = torch.clamp_min(torch.sqrt(variance), sigma_floor)
    return NormalizationStats(nu=shift + mean_centered, sigma=sigma)
