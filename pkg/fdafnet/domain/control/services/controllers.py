from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Any, Protocol

import torch

from ...shared.errors import InvalidConfigError
from ...shared.models import FilterDims, MaskPair
from ...spectral import REAL_DTYPE
from ..kalman import KalmanState, kalman_predict_correct
from ..psd import masked_error_psd, psd_xx_update
from ..step_sizes import DEFAULT_REG, dnn_fdaf_step, fdaf_step, kalman_step
from ..variants import MaskedVariant


@dataclass(frozen=True)
class ControllerState:
    psi_xx: torch.Tensor
    psi_pp: torch.Tensor
    kalman: KalmanState | None = None
    recurrent: Any = None

    def detached(self) -> "ControllerState":
        recurrent = self.recurrent.detached() if self.recurrent is not None else None
        kalman = self.kalman.detached() if self.kalman is not None else None
        return ControllerState(
            psi_xx=self.psi_xx.detach(),
            psi_pp=self.psi_pp.detach(),
            kalman=kalman,
            recurrent=recurrent,
        )


@dataclass(frozen=True)
class StepDecision:
    step: torch.Tensor
    state: ControllerState
    masks: MaskPair | None = None


class MaskModel(Protocol):
    def initial_state(self, batch_shape: tuple[int, ...]) -> Any: ...

    def estimate(self, e_spec: torch.Tensor, x_spec: torch.Tensor, state: Any) -> tuple[MaskPair, Any]: ...


class StepSizeController(Protocol):
    name: str

    def initial_state(self, batch_shape: tuple[int, ...] = ()) -> ControllerState: ...

    def compute(self, state: ControllerState, x_spec: torch.Tensor, e_spec: torch.Tensor) -> StepDecision: ...

    def observe_update(
        self,
        state: ControllerState,
        step: torch.Tensor,
        x_spec: torch.Tensor,
        w_hat: torch.Tensor,
        e_spec: torch.Tensor,
    ) -> ControllerState: ...


def _zeros(dims: FilterDims, batch_shape: tuple[int, ...]) -> torch.Tensor:
    return torch.zeros(batch_shape + (dims.fft_size,), dtype=REAL_DTYPE)


class FixedStepController:
    """Classical FDAF: mu / psi_xx."""

    def __init__(self, dims: FilterDims, *, mu_fdaf: float, lambda_x: float, reg: float = DEFAULT_REG, name: str = "fdaf"):
        if mu_fdaf <= 0:
            raise InvalidConfigError(f"mu_fdaf must be positive, got {mu_fdaf}")
        self.name = name
        self._dims = dims
        self._mu = mu_fdaf
        self._lambda_x = lambda_x
        self._reg = reg

    def initial_state(self, batch_shape: tuple[int, ...] = ()) -> ControllerState:
        return ControllerState(psi_xx=_zeros(self._dims, batch_shape), psi_pp=_zeros(self._dims, batch_shape))

    def compute(self, state: ControllerState, x_spec: torch.Tensor, e_spec: torch.Tensor) -> StepDecision:
        psi_xx = psd_xx_update(state.psi_xx, x_spec, self._lambda_x)
        step = fdaf_step(psi_xx, self._mu, self._reg)
        return StepDecision(step=step, state=replace(state, psi_xx=psi_xx))

    def observe_update(self, state, step, x_spec, w_hat, e_spec) -> ControllerState:
        return state


class KalmanController:
    """Diagonalized DFT-domain Kalman step-size with first-order noise PSD tracking."""

    def __init__(
        self,
        dims: FilterDims,
        *,
        a: float,
        psi_dw_init: float = 1.0,
        noise_smoothing: float = 0.5,
        reg: float = DEFAULT_REG,
        name: str | None = None,
    ):
        self.name = name or f"kalman_a{a:g}"
        self._dims = dims
        self._a = a
        self._psi_dw_init = psi_dw_init
        self._noise_smoothing = noise_smoothing
        self._reg = reg

    def initial_state(self, batch_shape: tuple[int, ...] = ()) -> ControllerState:
        return ControllerState(
            psi_xx=_zeros(self._dims, batch_shape),
            psi_pp=_zeros(self._dims, batch_shape),
            kalman=KalmanState.initial(self._dims, self._a, self._psi_dw_init, batch_shape),
        )

    def compute(self, state: ControllerState, x_spec: torch.Tensor, e_spec: torch.Tensor) -> StepDecision:
        step = kalman_step(state.kalman, x_spec, self._dims.m_over_r, self._reg)
        return StepDecision(step=step, state=state)

    def observe_update(self, state, step, x_spec, w_hat, e_spec) -> ControllerState:
        kalman = kalman_predict_correct(
            state.kalman,
            step,
            x_spec,
            w_hat,
            e_spec,
            self._dims,
            noise_smoothing=self._noise_smoothing,
        )
        return replace(state, kalman=kalman)


class MaskedStepController:
    """
    Error-aware FDAF step-size gated by the masks M^mu and M^e.
    Masks that the variant does not learn are held constant; with both fixed
    to one this is the EA-FDAF baseline and no mask model is needed.
    """

    def __init__(
        self,
        dims: FilterDims,
        variant: MaskedVariant,
        *,
        lambda_x: float,
        lambda_p: float | None = None,
        mu_max: float | None = None,
        reg: float = DEFAULT_REG,
        mask_model: MaskModel | None = None,
    ):
        if variant.uses_network and mask_model is None:
            raise InvalidConfigError(f"controller '{variant.name}' needs a trained mask model")
        self.name = variant.name
        self.variant = variant
        self._dims = dims
        self._lambda_x = lambda_x
        self._lambda_p = variant.lambda_p if lambda_p is None else lambda_p
        self._mu_max = variant.mu_max if mu_max is None else mu_max
        self._reg = reg
        self._mask_model = mask_model if variant.uses_network else None

    def initial_state(self, batch_shape: tuple[int, ...] = ()) -> ControllerState:
        recurrent = self._mask_model.initial_state(batch_shape) if self._mask_model else None
        return ControllerState(
            psi_xx=_zeros(self._dims, batch_shape),
            psi_pp=_zeros(self._dims, batch_shape),
            recurrent=recurrent,
        )

    def _fixed(self, value: float, like: torch.Tensor) -> torch.Tensor:
        shape = like.shape[:-1] + (self._dims.bins,)
        return torch.full(shape, value, dtype=REAL_DTYPE)

    def compute(self, state: ControllerState, x_spec: torch.Tensor, e_spec: torch.Tensor) -> StepDecision:
        recurrent = state.recurrent
        if self._mask_model is not None:
            estimated, recurrent = self._mask_model.estimate(e_spec, x_spec, recurrent)
            m_mu = estimated.m_mu if self.variant.learns_mu else self._fixed(self.variant.fixed_mu, x_spec)
            m_e = estimated.m_e if self.variant.learns_e else self._fixed(self.variant.fixed_e, x_spec)
        else:
            m_mu = self._fixed(self.variant.fixed_mu, x_spec)
            m_e = self._fixed(self.variant.fixed_e, x_spec)
        psi_xx = psd_xx_update(state.psi_xx, x_spec, self._lambda_x)
        psi_pp = masked_error_psd(state.psi_pp, e_spec, m_e, self._lambda_p, self._dims)
        step = dnn_fdaf_step(psi_xx, psi_pp, m_mu, self._mu_max, self._dims.m_over_r, self._dims, self._reg)
        new_state = ControllerState(psi_xx=psi_xx, psi_pp=psi_pp, kalman=None, recurrent=recurrent)
        return StepDecision(step=step, state=new_state, masks=MaskPair(m_mu=m_mu, m_e=m_e))

    def observe_update(self, state, step, x_spec, w_hat, e_spec) -> ControllerState:
        return state
