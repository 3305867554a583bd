from .adaptive_filter import prior_error, update

__all__ = ["prior_error", "update"]
