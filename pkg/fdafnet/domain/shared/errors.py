from __future__ import annotations

from typing import Any


class FdafError(Exception):
    """Base class for every error raised by the toolkit."""


class InvalidDimensionError(FdafError, ValueError):
    pass


class InvalidConfigError(FdafError, ValueError):
    pass


class InvalidInputError(FdafError, ValueError):
    pass


class InvalidMaskError(InvalidInputError):
    pass


class CheckpointFormatError(InvalidInputError):
    pass


class UpdateRejectedError(FdafError):
    """
    Non-finite values reached the filter update.
    `state` is the previous filter state with the rejection counted.
    """

    def __init__(self, message: str, *, state: Any):
        super().__init__(message)
        self.state = state


class TrainingDivergedError(FdafError):
    def __init__(self, message: str, *, block_index: int):
        super().__init__(f"{message} (block {block_index})")
        self.block_index = block_index
