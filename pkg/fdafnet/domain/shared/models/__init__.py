from .dims import FilterDims
from .masks import MaskPair

__all__ = ["FilterDims", "MaskPair"]
