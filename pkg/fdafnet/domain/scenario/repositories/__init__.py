from .signals import SignalSource

__all__ = ["SignalSource"]
