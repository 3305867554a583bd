from .estimator import MaskEstimator
from .features import (
    DEFAULT_FEATURE_EPS,
    DEFAULT_SIGMA_FLOOR,
    NormalizationStats,
    compute_features,
    estimate_normalization,
    log_power_features,
)
from .network import (
    GRUCell,
    MaskNetwork,
    RecurrentState,
    expected_parameter_count,
    flat_parameters,
    load_flat_parameters,
    parameter_count,
)

__all__ = [
    "DEFAULT_FEATURE_EPS",
    "DEFAULT_SIGMA_FLOOR",
    "GRUCell",
    "MaskEstimator",
    "MaskNetwork",
    "NormalizationStats",
    "RecurrentState",
    "compute_features",
    "estimate_normalization",
    "expected_parameter_count",
    "flat_parameters",
    "load_flat_parameters",
    "log_power_features",
    "parameter_count",
]
