from .scenario import (
    SOURCE_KINDS,
    SPLITS,
    TEST_SPLIT,
    TRAIN_SPLIT,
    Scenario,
    ScenarioConfig,
    SegmentDraw,
    scenario_seed,
)

__all__ = [
    "SOURCE_KINDS",
    "SPLITS",
    "TEST_SPLIT",
    "TRAIN_SPLIT",
    "Scenario",
    "ScenarioConfig",
    "SegmentDraw",
    "scenario_seed",
]
