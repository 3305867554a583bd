from .corpus import WavCorpusSignals, crop_or_tile
from .csv_tables import (
    METRIC_COLUMNS,
    TrainingLogCsv,
    write_mask_means,
    write_metric_series,
)
from .scenarios import ScenarioDirectory, read_f64, scenario_dir_name

__all__ = [
    "METRIC_COLUMNS",
    "ScenarioDirectory",
    "TrainingLogCsv",
    "WavCorpusSignals",
    "crop_or_tile",
    "read_f64",
    "scenario_dir_name",
    "write_mask_means",
    "write_metric_series",
]
