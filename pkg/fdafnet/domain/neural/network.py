"""
Mask-emitting recurrent network: tanh input layer, two stacked GRU layers,
two sigmoid heads producing the non-redundant step-size and error masks.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import torch
from torch import nn

from ..shared.errors import InvalidDimensionError
from ..shared.models import FilterDims, MaskPair


@dataclass(frozen=True)
class RecurrentState:
    h1: torch.Tensor
    h2: torch.Tensor

    def detached(self) -> "RecurrentState":
        return RecurrentState(h1=self.h1.detach(), h2=self.h2.detach())


def _init_linear(layer: nn.Linear) -> None:
    bound = 1.0 / math.sqrt(layer.in_features)
    nn.init.uniform_(layer.weight, -bound, bound)
    if layer.bias is not None:
        nn.init.zeros_(layer.bias)


class GRUCell(nn.Module):
    """
    u = sigmoid(W_u x + U_u h + b_u), r = sigmoid(W_r x + U_r h + b_r),
    c = tanh(W_c x + U_c (r * h) + b_c), h' = u * h + (1 - u) * c.
    """

    def __init__(self, input_size: int, hidden_size: int):
        super().__init__()
        self.hidden_size = hidden_size
        self.input_gates = nn.Linear(input_size, 3 * hidden_size)
        self.hidden_gates = nn.Linear(hidden_size, 2 * hidden_size, bias=False)
        self.hidden_candidate = nn.Linear(hidden_size, hidden_size, bias=False)
        self.reset_parameters()

    def reset_parameters(self) -> None:
        for layer in (self.input_gates, self.hidden_gates, self.hidden_candidate):
            _init_linear(layer)

    def forward(self, x: torch.Tensor, h: torch.Tensor) -> torch.Tensor:
        x_u, x_r, x_c = torch.chunk(self.input_gates(x), 3, dim=-1)
        h_u, h_r = torch.chunk(self.hidden_gates(h), 2, dim=-1)
        update_gate = torch.sigmoid(x_u + h_u)
        reset_gate = torch.sigmoid(x_r + h_r)
        candidate = torch.tanh(x_c + self.hidden_candidate(reset_gate * h))
        return update_gate * h + (1.0 - update_gate) * candidate


class MaskNetwork(nn.Module):
    def __init__(self, feature_size: int, hidden_size: int, bins: int):
        super().__init__()
        self.feature_size = feature_size
        self.hidden_size = hidden_size
        self.bins = bins
        self.input_layer = nn.Linear(feature_size, hidden_size)
        self.gru1 = GRUCell(hidden_size, hidden_size)
        self.gru2 = GRUCell(hidden_size, hidden_size)
        self.head_mu = nn.Linear(hidden_size, bins)
        self.head_e = nn.Linear(hidden_size, bins)
        self.reset_parameters()

    @classmethod
    def for_dims(cls, dims: FilterDims, hidden_size: int) -> "MaskNetwork":
        return cls(dims.feature_size, hidden_size, dims.bins)

    def reset_parameters(self) -> None:
        for layer in (self.input_layer, self.head_mu, self.head_e):
            _init_linear(layer)
        self.gru1.reset_parameters()
        self.gru2.reset_parameters()

    @property
    def dtype(self) -> torch.dtype:
        return self.input_layer.weight.dtype

    def initial_state(self, batch_shape: tuple[int, ...] = ()) -> RecurrentState:
        shape = batch_shape + (self.hidden_size,)
        return RecurrentState(
            h1=torch.zeros(shape, dtype=self.dtype),
            h2=torch.zeros(shape, dtype=self.dtype),
        )

    def forward(self, features: torch.Tensor, state: RecurrentState) -> tuple[MaskPair, RecurrentState]:
        if features.shape[-1] != self.feature_size:
            raise InvalidDimensionError(
                f"feature vector: expected last dimension {self.feature_size}, got {tuple(features.shape)}"
            )
        if state.h1.shape[-1] != self.hidden_size or state.h2.shape[-1] != self.hidden_size:
            raise InvalidDimensionError(f"recurrent state must have {self.hidden_size} units")
        z = torch.tanh(self.input_layer(features))
        h1 = self.gru1(z, state.h1)
        h2 = self.gru2(h1, state.h2)
        masks = MaskPair(m_mu=torch.sigmoid(self.head_mu(h2)), m_e=torch.sigmoid(self.head_e(h2)))
        return masks, RecurrentState(h1=h1, h2=h2)


def expected_parameter_count(dims: FilterDims, hidden_size: int) -> int:
    p = hidden_size
    gru_layer = 6 * p * p + 3 * p
    return (dims.feature_size + 1) * p + 2 * gru_layer + 2 * (p + 1) * dims.bins


def parameter_count(network: nn.Module) -> int:
    return sum(parameter.numel() for parameter in network.parameters())


def flat_parameters(network: nn.Module) -> torch.Tensor:
    return nn.utils.parameters_to_vector(network.parameters())


def load_flat_parameters(network: nn.Module, theta: torch.Tensor) -> None:
    if theta.numel() != parameter_count(network):
        raise InvalidDimensionError(f"parameter vector has {theta.numel()} entries, network needs {parameter_count(network)}")
    with torch.no_grad():
        nn.utils.vector_to_parameters(theta.to(network.input_layer.weight.dtype), network.parameters())
