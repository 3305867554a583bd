from .batching import TrainingExample, collate
from .loss import (
    UPSILON_FLOOR,
    DifferentiableTrace,
    TrainingBatch,
    gradient,
    log_nesd_db,
    nesd,
    sequence_loss,
)
from .optimizer import AdamOptimizer, AdamSettings, OptimizerState, adam_update
from .services import (
    BatchReport,
    EpochReport,
    Trainer,
    TrainingObserver,
    TrainingSettings,
    TrainingSnapshot,
)

__all__ = [
    "UPSILON_FLOOR",
    "AdamOptimizer",
    "AdamSettings",
    "BatchReport",
    "DifferentiableTrace",
    "EpochReport",
    "OptimizerState",
    "Trainer",
    "TrainingBatch",
    "TrainingExample",
    "TrainingObserver",
    "TrainingSettings",
    "TrainingSnapshot",
    "adam_update",
    "collate",
    "gradient",
    "log_nesd_db",
    "nesd",
    "sequence_loss",
]
