from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import torch

from ..shared.errors import InvalidConfigError, InvalidDimensionError


@dataclass(frozen=True)
class AdamSettings:
    learning_rate: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    clip_norm: float | None = 10.0

    def __post_init__(self) -> None:
        if self.learning_rate < 0:
            raise InvalidConfigError(f"learning rate must be >= 0, got {self.learning_rate}")
        if not (0.0 <= self.beta1 < 1.0 and 0.0 <= self.beta2 < 1.0):
            raise InvalidConfigError(f"ADAM betas must lie in [0, 1), got ({self.beta1}, {self.beta2})")
        if self.eps <= 0:
            raise InvalidConfigError(f"ADAM eps must be positive, got {self.eps}")
        if self.clip_norm is not None and self.clip_norm <= 0:
            raise InvalidConfigError(f"clip_norm must be positive or null, got {self.clip_norm}")


@dataclass(frozen=True)
class OptimizerState:
    """Flat moment vectors shaped like theta plus the step counter."""

    exp_avg: torch.Tensor
    exp_avg_sq: torch.Tensor
    step: int
    settings: AdamSettings

    def __post_init__(self) -> None:
        if self.exp_avg.shape != self.exp_avg_sq.shape or self.exp_avg.dim() != 1:
            raise InvalidDimensionError(
                f"moment vectors must be flat and equal-sized, got {tuple(self.exp_avg.shape)} and {tuple(self.exp_avg_sq.shape)}"
            )
        if self.step < 0:
            raise InvalidDimensionError(f"step counter must be >= 0, got {self.step}")

    @classmethod
    def initial(cls, size: int, settings: AdamSettings, dtype: torch.dtype = torch.float64) -> "OptimizerState":
        return cls(
            exp_avg=torch.zeros(size, dtype=dtype),
            exp_avg_sq=torch.zeros(size, dtype=dtype),
            step=0,
            settings=settings,
        )

    @property
    def size(self) -> int:
        return int(self.exp_avg.shape[0])


class AdamOptimizer:
    """
    torch.optim.Adam over a fixed parameter list, driven by flat gradient
    vectors, with optional global L2 clipping before each step.
    """

    def __init__(self, parameters: Sequence[torch.nn.Parameter], settings: AdamSettings):
        self.parameters = list(parameters)
        self.settings = settings
        self._size = sum(p.numel() for p in self.parameters)
        self._optim = torch.optim.Adam(
            self.parameters,
            lr=settings.learning_rate,
            betas=(settings.beta1, settings.beta2),
            eps=settings.eps,
        )
        self._step = 0

    @property
    def step_count(self) -> int:
        return self._step

    def _assign_grad(self, grad: torch.Tensor) -> None:
        if grad.dim() != 1 or grad.numel() != self._size:
            raise InvalidDimensionError(f"gradient has shape {tuple(grad.shape)}, parameters need ({self._size},)")
        offset = 0
        for p in self.parameters:
            n = p.numel()
            p.grad = grad[offset : offset + n].detach().reshape(p.shape).to(p.dtype).clone()
            offset += n

    def update(self, grad: torch.Tensor) -> float:
        """Applies one step; returns the gradient norm before clipping."""
        self._assign_grad(grad)
        if self.settings.clip_norm is not None:
            norm = torch.nn.utils.clip_grad_norm_(self.parameters, self.settings.clip_norm)
        else:
            norm = torch.linalg.vector_norm(grad.detach())
        self._optim.step()
        self._optim.zero_grad(set_to_none=True)
        self._step += 1
        return float(norm)

    def state(self) -> OptimizerState:
        exp_avg, exp_avg_sq = [], []
        for p in self.parameters:
            slot = self._optim.state.get(p, {})
            exp_avg.append(slot["exp_avg"].reshape(-1) if "exp_avg" in slot else torch.zeros(p.numel(), dtype=p.dtype))
            exp_avg_sq.append(
                slot["exp_avg_sq"].reshape(-1) if "exp_avg_sq" in slot else torch.zeros(p.numel(), dtype=p.dtype)
            )
        return OptimizerState(
            exp_avg=torch.cat(exp_avg).detach().clone() if exp_avg else torch.zeros(0),
            exp_avg_sq=torch.cat(exp_avg_sq).detach().clone() if exp_avg_sq else torch.zeros(0),
            step=self._step,
            settings=self.settings,
        )

    def load_state(self, state: OptimizerState) -> None:
        if state.size != self._size:
            raise InvalidDimensionError(f"optimizer state has {state.size} entries, parameters need {self._size}")
        self._step = state.step
        if state.step == 0:
            self._optim.state.clear()
            return
        offset = 0
        for p in self.parameters:
            n = p.numel()
            self._optim.state[p] = {
                "step": torch.tensor(float(state.step)),
                "exp_avg": state.exp_avg[offset : offset + n].reshape(p.shape).to(p.dtype).clone(),
                "exp_avg_sq": state.exp_avg_sq[offset : offset + n].reshape(p.shape).to(p.dtype).clone(),
            }
            offset += n


def adam_update(
    state: OptimizerState,
    theta: torch.Tensor,
    grad: torch.Tensor,
) -> tuple[OptimizerState, torch.Tensor]:
    """Functional ADAM step on a flat parameter vector."""
    if theta.dim() != 1 or theta.shape != grad.shape or theta.shape[0] != state.size:
        raise InvalidDimensionError(
            f"shape mismatch: theta {tuple(theta.shape)}, grad {tuple(grad.shape)}, state ({state.size},)"
        )
    param = torch.nn.Parameter(theta.detach().clone())
    optimizer = AdamOptimizer([param], state.settings)
    optimizer.load_state(state)
    optimizer.update(grad)
    return optimizer.state(), param.detach().clone()
