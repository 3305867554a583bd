from .models import FilterState
from .services import prior_error, update

__all__ = ["FilterState", "prior_error", "update"]
