from .trainer import (
    BatchReport,
    EpochReport,
    Trainer,
    TrainingObserver,
    TrainingSettings,
    TrainingSnapshot,
)

__all__ = [
    "BatchReport",
    "EpochReport",
    "Trainer",
    "TrainingObserver",
    "TrainingSettings",
    "TrainingSnapshot",
]
