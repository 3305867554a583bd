from .state import FilterState

__all__ = ["FilterState"]
