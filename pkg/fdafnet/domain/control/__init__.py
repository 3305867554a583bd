from .kalman import KalmanState, kalman_predict_correct
from .psd import check_mask, masked_error, masked_error_psd, psd_xx_update
from .services import (
    ControllerState,
    FixedStepController,
    KalmanController,
    MaskedStepController,
    MaskModel,
    StepDecision,
    StepSizeController,
)
from .step_sizes import DEFAULT_REG, dnn_fdaf_step, fdaf_step, kalman_step
from .variants import (
    FDAF,
    KALMAN,
    MASKED_VARIANTS,
    MaskedVariant,
    is_kalman,
    parse_kalman_name,
    requires_network,
    validate_controller_name,
)

__all__ = [
    "DEFAULT_REG",
    "FDAF",
    "KALMAN",
    "MASKED_VARIANTS",
    "ControllerState",
    "FixedStepController",
    "KalmanController",
    "KalmanState",
    "MaskModel",
    "MaskedStepController",
    "MaskedVariant",
    "StepDecision",
    "StepSizeController",
    "check_mask",
    "dnn_fdaf_step",
    "fdaf_step",
    "is_kalman",
    "kalman_predict_correct",
    "kalman_step",
    "masked_error",
    "masked_error_psd",
    "parse_kalman_name",
    "psd_xx_update",
    "requires_network",
    "validate_controller_name",
]
