from __future__ import annotations

from dataclasses import dataclass

import torch


@dataclass(frozen=True)
class MaskPair:
    """Non-redundant (M/2+1) step-size mask and error mask, entries in [0, 1]."""

    m_mu: torch.Tensor
    m_e: torch.Tensor

    def detached(self) -> "MaskPair":
        return MaskPair(m_mu=self.m_mu.detach(), m_e=self.m_e.detach())
