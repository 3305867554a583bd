from .models import (
    SOURCE_KINDS,
    SPLITS,
    TEST_SPLIT,
    TRAIN_SPLIT,
    Scenario,
    ScenarioConfig,
    SegmentDraw,
    scenario_seed,
)
from .repositories import SignalSource
from .services import RandomizerFactory, ScenarioBuilder
from .synth import SyntheticSignals, decay_envelope, mix_at_snr, synth_air, synth_source

__all__ = [
    "SOURCE_KINDS",
    "SPLITS",
    "TEST_SPLIT",
    "TRAIN_SPLIT",
    "RandomizerFactory",
    "Scenario",
    "ScenarioBuilder",
    "ScenarioConfig",
    "SegmentDraw",
    "SignalSource",
    "SyntheticSignals",
    "decay_envelope",
    "mix_at_snr",
    "scenario_seed",
    "synth_air",
    "synth_source",
]
