from .randomizer import NumpyRandomizer

__all__ = ["NumpyRandomizer"]
