from __future__ import annotations

from typing import MutableSequence, Sequence, TypeVar

import numpy as np

from ...domain.shared.repositories import Randomizer

T = TypeVar("T")


class NumpyRandomizer(Randomizer):
    def __init__(self, source: np.random.Generator | None = None):
        self._random = source or np.random.default_rng()

    @classmethod
    def from_seed(cls, seed: int | Sequence[int] | np.random.SeedSequence) -> "NumpyRandomizer":
        return cls(np.random.default_rng(seed))

    def normal(self, size: int | tuple[int, ...], scale: float = 1.0) -> np.ndarray:
        return self._random.normal(0.0, scale, size)

    def uniform(self, low: float, high: float, size: int | tuple[int, ...] | None = None) -> float | np.ndarray:
        value = self._random.uniform(low, high, size)
        return float(value) if size is None else value

    def integers(self, low: int, high: int) -> int:
        return int(self._random.integers(low, high))

    def choice(self, seq: Sequence[T]) -> T:
        return seq[int(self._random.integers(0, len(seq)))]

    def shuffle(self, seq: MutableSequence[T]) -> None:
        order = self._random.permutation(len(seq))
        items = [seq[i] for i in order]
        seq[:] = items
