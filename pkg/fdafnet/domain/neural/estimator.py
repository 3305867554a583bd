from __future__ import annotations

import torch

from ..shared.models import FilterDims, MaskPair
from ..spectral import REAL_DTYPE
from .features import DEFAULT_FEATURE_EPS, NormalizationStats, compute_features
from .network import MaskNetwork, RecurrentState


class MaskEstimator:
    """Feature extraction plus network forward pass, one block at a time."""

    def __init__(
        self,
        network: MaskNetwork,
        stats: NormalizationStats,
        dims: FilterDims,
        *,
        eps: float = DEFAULT_FEATURE_EPS,
    ):
        self.network = network
        self.stats = stats
        self._dims = dims
        self._eps = eps

    def initial_state(self, batch_shape: tuple[int, ...] = ()) -> RecurrentState:
        return self.network.initial_state(batch_shape)

    def estimate(self, e_spec: torch.Tensor, x_spec: torch.Tensor, state: RecurrentState) -> tuple[MaskPair, RecurrentState]:
        features = compute_features(e_spec, x_spec, self.stats, self._dims, self._eps)
        masks, state = self.network(features.to(self.network.dtype), state)
        if self.network.dtype != REAL_DTYPE:
            masks = MaskPair(m_mu=masks.m_mu.to(REAL_DTYPE), m_e=masks.m_e.to(REAL_DTYPE))
        return masks, state
