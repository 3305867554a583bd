from .errors import (
    CheckpointFormatError,
    FdafError,
    InvalidConfigError,
    InvalidDimensionError,
    InvalidInputError,
    InvalidMaskError,
    TrainingDivergedError,
    UpdateRejectedError,
)
from .models import FilterDims, MaskPair
from .repositories import Randomizer

__all__ = [
    "CheckpointFormatError",
    "FdafError",
    "FilterDims",
    "InvalidConfigError",
    "InvalidDimensionError",
    "InvalidInputError",
    "InvalidMaskError",
    "MaskPair",
    "Randomizer",
    "TrainingDivergedError",
    "UpdateRejectedError",
]
