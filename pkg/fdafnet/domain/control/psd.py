from __future__ import annotations

import torch

from ..shared.errors import InvalidConfigError, InvalidMaskError
from ..shared.models import FilterDims
from ..spectral import mirror_to_full, power, require_length


def _check_smoothing(value: float, name: str, *, closed: bool) -> None:
    upper_ok = value <= 1.0 if closed else value < 1.0
    if not (0.0 <= value and upper_ok):
        raise InvalidConfigError(f"{name} out of range: {value}")


def check_mask(mask: torch.Tensor, name: str) -> None:
    """NaN passes through so that the filter update can reject it."""
    values = mask.detach()
    if bool(((values < 0) | (values > 1)).any()):
        raise InvalidMaskError(f"{name} must lie in [0, 1]")


def psd_xx_update(prev: torch.Tensor, x_spec: torch.Tensor, lambda_x: float) -> torch.Tensor:
    _check_smoothing(lambda_x, "lambda_x", closed=False)
    return lambda_x * prev + (1.0 - lambda_x) * power(x_spec)


def masked_error(e_spec: torch.Tensor, m_e: torch.Tensor, dims: FilterDims) -> torch.Tensor:
    check_mask(m_e, "error mask")
    require_length(e_spec, dims.fft_size, "error spectrum")
    return mirror_to_full(m_e, dims) * e_spec


def masked_error_psd(
    prev: torch.Tensor,
    e_spec: torch.Tensor,
    m_e: torch.Tensor,
    lambda_p: float,
    dims: FilterDims,
) -> torch.Tensor:
    _check_smoothing(lambda_p, "lambda_p", closed=True)
    p_hat = masked_error(e_spec, m_e, dims)
    return lambda_p * prev + (1.0 - lambda_p) * power(p_hat)
