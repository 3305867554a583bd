from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..domain.control import DEFAULT_REG, FDAF, MASKED_VARIANTS, validate_controller_name
from ..domain.metrics import DEFAULT_LAMBDA_ERLE
from ..domain.neural import DEFAULT_FEATURE_EPS, DEFAULT_SIGMA_FLOOR
from ..domain.scenario import ScenarioConfig
from ..domain.shared import FilterDims, InvalidConfigError
from ..domain.training import AdamSettings, TrainingSettings

NETWORK_DTYPES = ("float32", "float64")


@dataclass(frozen=True)
class FilterSection:
    fft_size: int = 256
    hop: int = 128
    filter_length: Optional[int] = None
    reg: float = DEFAULT_REG

    def __post_init__(self) -> None:
        dims = FilterDims(self.fft_size, self.hop)
        if self.filter_length is not None and self.filter_length != dims.filter_length:
            raise InvalidConfigError(
                f"filter_length must equal fft_size - hop = {dims.filter_length}, got {self.filter_length}"
            )
        if self.reg < 0:
            raise InvalidConfigError(f"reg must be >= 0, got {self.reg}")

    @property
    def dims(self) -> FilterDims:
        return FilterDims(self.fft_size, self.hop)


@dataclass(frozen=True)
class VariantSection:
    lambda_p: float
    mu_max: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.lambda_p <= 1.0:
            raise InvalidConfigError(f"lambda_p must lie in [0, 1], got {self.lambda_p}")
        if self.mu_max < 0:
            raise InvalidConfigError(f"mu_max must be >= 0, got {self.mu_max}")


def _default_variants() -> dict[str, VariantSection]:
    return {name: VariantSection(v.lambda_p, v.mu_max) for name, v in MASKED_VARIANTS.items()}


@dataclass(frozen=True)
class ControllerSection:
    name: str = "dnn_fdaf"
    lambda_x: float = 0.5
    mu_fdaf: float = 0.5
    kalman_a: float = 0.99
    kalman_psi_dw_init: float = 1.0
    kalman_noise_smoothing: float = 0.5
    variants: dict[str, VariantSection] = field(default_factory=_default_variants)

    def __post_init__(self) -> None:
        validate_controller_name(self.name)
        if not 0.0 <= self.lambda_x < 1.0:
            raise InvalidConfigError(f"lambda_x must lie in [0, 1), got {self.lambda_x}")
        if self.mu_fdaf <= 0:
            raise InvalidConfigError(f"mu_fdaf must be positive, got {self.mu_fdaf}")
        if not 0.0 < self.kalman_a <= 1.0:
            raise InvalidConfigError(f"kalman_a must lie in (0, 1], got {self.kalman_a}")
        if self.kalman_psi_dw_init < 0:
            raise InvalidConfigError("kalman_psi_dw_init must be >= 0")
        if not 0.0 <= self.kalman_noise_smoothing < 1.0:
            raise InvalidConfigError("kalman_noise_smoothing must lie in [0, 1)")
        unknown = set(self.variants) - set(MASKED_VARIANTS)
        if unknown:
            raise InvalidConfigError(f"unknown controller variants: {', '.join(sorted(unknown))}")
        missing = set(MASKED_VARIANTS) - set(self.variants)
        if missing:
            merged = _default_variants()
            merged.update(self.variants)
            object.__setattr__(self, "variants", merged)


@dataclass(frozen=True)
class NetworkSection:
    hidden_size: int = 32
    feature_eps: float = DEFAULT_FEATURE_EPS
    sigma_floor: float = DEFAULT_SIGMA_FLOOR
    dtype: str = "float64"

    def __post_init__(self) -> None:
        if self.hidden_size < 1:
            raise InvalidConfigError(f"hidden_size must be >= 1, got {self.hidden_size}")
        if self.feature_eps <= 0 or self.sigma_floor <= 0:
            raise InvalidConfigError("feature_eps and sigma_floor must be positive")
        if self.dtype not in NETWORK_DTYPES:
            raise InvalidConfigError(f"network dtype must be one of {NETWORK_DTYPES}, got {self.dtype!r}")


@dataclass(frozen=True)
class TrainingSection:
    variant: str = "dnn_fdaf"
    epochs: int = 10
    batch_size: int = 4
    learning_rate: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    adam_eps: float = 1e-8
    clip_norm: Optional[float] = 10.0
    truncation: int = 0
    checkpoint_every: int = 1
    max_blocks: Optional[int] = None
    scenario_count: int = 200
    seed: int = 0

    def __post_init__(self) -> None:
        variant = MASKED_VARIANTS.get(self.variant)
        if variant is None or not variant.uses_network:
            trainable = [name for name, v in MASKED_VARIANTS.items() if v.uses_network]
            raise InvalidConfigError(f"training variant must be one of {trainable}, got {self.variant!r}")
        if self.max_blocks is not None and self.max_blocks < 1:
            raise InvalidConfigError(f"max_blocks must be >= 1 or null, got {self.max_blocks}")
        if self.scenario_count < 1:
            raise InvalidConfigError(f"scenario_count must be >= 1, got {self.scenario_count}")
        self.settings()
        self.adam()

    def settings(self) -> TrainingSettings:
        return TrainingSettings(
            epochs=self.epochs,
            batch_size=self.batch_size,
            truncation=self.truncation,
            checkpoint_every=self.checkpoint_every,
        )

    def adam(self) -> AdamSettings:
        return AdamSettings(
            learning_rate=self.learning_rate,
            beta1=self.beta1,
            beta2=self.beta2,
            eps=self.adam_eps,
            clip_norm=self.clip_norm,
        )


@dataclass(frozen=True)
class ScenarioSection:
    sample_rate: int = 16000
    air_length: Optional[int] = None
    duration: float = 10.0
    switch_window: tuple[float, float] = (7.2, 8.8)
    speech_snr_db: Optional[tuple[float, float]] = (-10.0, 10.0)
    stationary_snr_db: Optional[tuple[float, float]] = (25.0, 35.0)
    t60_range: tuple[float, float] = (0.12, 0.78)
    onset_delay: tuple[int, int] = (8, 32)
    source_kind: str = "ar1_modulated"
    interferer_kind: str = "ar1_modulated"
    source_level: float = 0.05
    seed: int = 0
    source_dir: Optional[str] = None
    interferer_dir: Optional[str] = None
    air_dir: Optional[str] = None


@dataclass(frozen=True)
class MetricsSection:
    lambda_erle: float = DEFAULT_LAMBDA_ERLE
    steady_state_window: int = 50
    reconvergence_tolerance_db: float = 3.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.lambda_erle < 1.0:
            raise InvalidConfigError(f"lambda_erle must lie in [0, 1), got {self.lambda_erle}")
        if self.steady_state_window < 1:
            raise InvalidConfigError("steady_state_window must be >= 1")


@dataclass(frozen=True)
class EvalSection:
    controllers: tuple[str, ...] = (FDAF, "kalman_a0.99", "kalman_a0.999", "ea_fdaf")
    workers: int = 1
    write_plot: bool = True

    def __post_init__(self) -> None:
        if not self.controllers:
            raise InvalidConfigError("eval.controllers must not be empty")
        for name in self.controllers:
            validate_controller_name(name)
        if self.workers < 1:
            raise InvalidConfigError(f"eval.workers must be >= 1, got {self.workers}")


@dataclass(frozen=True)
class RunConfig:
    filter: FilterSection = field(default_factory=FilterSection)
    controller: ControllerSection = field(default_factory=ControllerSection)
    network: NetworkSection = field(default_factory=NetworkSection)
    training: TrainingSection = field(default_factory=TrainingSection)
    scenario: ScenarioSection = field(default_factory=ScenarioSection)
    metrics: MetricsSection = field(default_factory=MetricsSection)
    eval: EvalSection = field(default_factory=EvalSection)

    def __post_init__(self) -> None:
        self.scenario_config()

    @property
    def dims(self) -> FilterDims:
        return self.filter.dims

    def scenario_config(self) -> ScenarioConfig:
        s = self.scenario
        return ScenarioConfig(
            sample_rate=s.sample_rate,
            fft_size=self.filter.fft_size,
            hop=self.filter.hop,
            air_length=s.air_length,
            duration=s.duration,
            switch_window=tuple(s.switch_window),
            speech_snr_db=tuple(s.speech_snr_db) if s.speech_snr_db is not None else None,
            stationary_snr_db=tuple(s.stationary_snr_db) if s.stationary_snr_db is not None else None,
            t60_range=tuple(s.t60_range),
            onset_delay=tuple(s.onset_delay),
            source_kind=s.source_kind,
            interferer_kind=s.interferer_kind,
            source_level=s.source_level,
            seed=s.seed,
            source_dir=s.source_dir,
            interferer_dir=s.interferer_dir,
            air_dir=s.air_dir,
        )
