from __future__ import annotations

from typing import MutableSequence, Protocol, Sequence, TypeVar

import numpy as np

T = TypeVar("T")


class Randomizer(Protocol):
    def normal(self, size: int | tuple[int, ...], scale: float = 1.0) -> np.ndarray: ...

    def uniform(self, low: float, high: float, size: int | tuple[int, ...] | None = None) -> float | np.ndarray: ...

    def integers(self, low: int, high: int) -> int: ...

    def choice(self, seq: Sequence[T]) -> T: ...

    def shuffle(self, seq: MutableSequence[T]) -> None: ...
