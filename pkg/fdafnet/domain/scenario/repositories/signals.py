from __future__ import annotations

from typing import Protocol

import numpy as np

from ...shared.repositories import Randomizer


class SignalSource(Protocol):
    def source(self, length: int, randomizer: Randomizer) -> np.ndarray: ...

    def interferer(self, length: int, randomizer: Randomizer) -> np.ndarray: ...

    def air(self, length: int, t60: float, onset: int, randomizer: Randomizer) -> np.ndarray: ...
