from __future__ import annotations

import torch

from ..shared.errors import InvalidConfigError
from ..shared.models import FilterDims
from ..spectral import mirror_to_full, power
from .kalman import KalmanState
from .psd import check_mask

DEFAULT_REG = 1e-10


def fdaf_step(psi_xx: torch.Tensor, mu_fdaf: float, reg: float = DEFAULT_REG) -> torch.Tensor:
    if mu_fdaf <= 0:
        raise InvalidConfigError(f"mu_fdaf must be positive, got {mu_fdaf}")
    return mu_fdaf / (psi_xx + reg)


def kalman_step(ks: KalmanState, x_spec: torch.Tensor, m_over_r: float, reg: float = DEFAULT_REG) -> torch.Tensor:
    return ks.psi_dw / (power(x_spec) * ks.psi_dw + m_over_r * ks.psi_nn + reg)


def dnn_fdaf_step(
    psi_xx: torch.Tensor,
    psi_pp: torch.Tensor,
    m_mu: torch.Tensor,
    mu_max: float,
    m_over_r: float,
    dims: FilterDims,
    reg: float = DEFAULT_REG,
) -> torch.Tensor:
    """Masked step-size; bounded by mu_max / (psi_xx + reg) for every mask in [0, 1]."""
    if mu_max < 0:
        raise InvalidConfigError(f"mu_max must be non-negative, got {mu_max}")
    check_mask(m_mu, "step-size mask")
    return mu_max * mirror_to_full(m_mu, dims) / (psi_xx + m_over_r * psi_pp + reg)
