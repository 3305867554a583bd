from .measures import (
    DEFAULT_ERLE_REG,
    DEFAULT_LAMBDA_ERLE,
    ERLE_CAP_DB,
    ERLE_FLOOR_DB,
    NESD_FLOOR_DB,
    ErleState,
    MetricSeries,
    aggregate,
    aggregate_runs,
    erle_update,
    nesd_zero_padded,
    reconvergence_blocks,
    steady_state_level,
)
from .services import Evaluator, RunEvaluation

__all__ = [
    "DEFAULT_ERLE_REG",
    "DEFAULT_LAMBDA_ERLE",
    "ERLE_CAP_DB",
    "ERLE_FLOOR_DB",
    "NESD_FLOOR_DB",
    "ErleState",
    "Evaluator",
    "MetricSeries",
    "RunEvaluation",
    "aggregate",
    "aggregate_runs",
    "erle_update",
    "nesd_zero_padded",
    "reconvergence_blocks",
    "steady_state_level",
]
