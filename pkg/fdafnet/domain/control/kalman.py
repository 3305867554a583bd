from __future__ import annotations

from dataclasses import dataclass, replace

import torch

from ..shared.errors import InvalidConfigError
from ..shared.models import FilterDims
from ..spectral import REAL_DTYPE, power


@dataclass(frozen=True)
class KalmanState:
    """
    Per-bin state of the diagonalized DFT-domain Kalman step-size:
    system-mismatch uncertainty psi_dw, noise PSD psi_nn, transition factor a.
    """

    psi_dw: torch.Tensor
    psi_nn: torch.Tensor
    a: float

    def __post_init__(self) -> None:
        if not 0.0 < self.a <= 1.0:
            raise InvalidConfigError(f"state transition parameter must lie in (0, 1], got {self.a}")

    @classmethod
    def initial(cls, dims: FilterDims, a: float, psi_dw_init: float, batch_shape: tuple[int, ...] = ()) -> "KalmanState":
        shape = batch_shape + (dims.fft_size,)
        return cls(
            psi_dw=torch.full(shape, float(psi_dw_init), dtype=REAL_DTYPE),
            psi_nn=torch.zeros(shape, dtype=REAL_DTYPE),
            a=a,
        )

    def detached(self) -> "KalmanState":
        return replace(self, psi_dw=self.psi_dw.detach(), psi_nn=self.psi_nn.detach())


def kalman_predict_correct(
    ks: KalmanState,
    step: torch.Tensor,
    x_spec: torch.Tensor,
    w_hat: torch.Tensor,
    e_spec: torch.Tensor,
    dims: FilterDims,
    noise_smoothing: float = 0.5,
) -> KalmanState:
    r_over_m = dims.hop / dims.fft_size
    corrected = (1.0 - step * power(x_spec) * r_over_m) * ks.psi_dw
    a2 = ks.a * ks.a
    predicted = a2 * corrected + (1.0 - a2) * power(w_hat)
    psi_nn = noise_smoothing * ks.psi_nn + (1.0 - noise_smoothing) * power(e_spec) * r_over_m
    return KalmanState(psi_dw=predicted, psi_nn=psi_nn, a=ks.a)
