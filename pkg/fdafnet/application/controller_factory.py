from __future__ import annotations

from ..domain.control import (
    FDAF,
    MASKED_VARIANTS,
    FixedStepController,
    KalmanController,
    MaskedStepController,
    MaskModel,
    StepSizeController,
    is_kalman,
    parse_kalman_name,
    validate_controller_name,
)
from ..domain.neural import MaskEstimator, MaskNetwork, NormalizationStats
from ..domain.pipeline import StreamRunner
from ..domain.shared import InvalidConfigError
from .config import RunConfig


class ControllerFactory:
    """Builds step-size controllers by name with the constants of the run configuration."""

    def __init__(self, config: RunConfig):
        self._config = config

    def mask_estimator(self, network: MaskNetwork, stats: NormalizationStats) -> MaskEstimator:
        return MaskEstimator(network, stats, self._config.dims, eps=self._config.network.feature_eps)

    def build(self, name: str, *, mask_model: MaskModel | None = None) -> StepSizeController:
        validate_controller_name(name)
        dims = self._config.dims
        section = self._config.controller
        reg = self._config.filter.reg
        if name == FDAF:
            return FixedStepController(dims, mu_fdaf=section.mu_fdaf, lambda_x=section.lambda_x, reg=reg)
        if is_kalman(name):
            a = parse_kalman_name(name)
            return KalmanController(
                dims,
                a=section.kalman_a if a is None else a,
                psi_dw_init=section.kalman_psi_dw_init,
                noise_smoothing=section.kalman_noise_smoothing,
                reg=reg,
                name=name,
            )
        variant = MASKED_VARIANTS[name]
        if variant.uses_network and mask_model is None:
            raise InvalidConfigError(f"controller '{name}' needs a checkpoint")
        constants = section.variants[name]
        return MaskedStepController(
            dims,
            variant,
            lambda_x=section.lambda_x,
            lambda_p=constants.lambda_p,
            mu_max=constants.mu_max,
            reg=reg,
            mask_model=mask_model,
        )

    def runner(self, name: str, *, mask_model: MaskModel | None = None, strict: bool = False) -> StreamRunner:
        return StreamRunner(self.build(name, mask_model=mask_model), self._config.dims, strict=strict)
