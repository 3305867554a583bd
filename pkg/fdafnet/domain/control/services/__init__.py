from .controllers import (
    ControllerState,
    FixedStepController,
    KalmanController,
    MaskedStepController,
    MaskModel,
    StepDecision,
    StepSizeController,
)

__all__ = [
    "ControllerState",
    "FixedStepController",
    "KalmanController",
    "MaskModel",
    "MaskedStepController",
    "StepDecision",
    "StepSizeController",
]
