"""
Metrics

Episode records, SPL and outcome rates, seed aggregation and the shortest
drivable path used for SPL.
"""

from .errors import EmptyRecordSetError, MetricsError, NoPathError, ShapeMismatchError
from .navigation import METRIC_FIELDS, RateRow, mean_std, rates, spl
from .records import METRIC_CAUSES, EpisodeCause, EpisodeRecord, StepLogEntry
from .report import CellKey, CellStats, EvalReport, aggregate_seeds, format_band
from .shortest_path import ShortestPath, reflex_vertices, shortest_path, shortest_path_length

__all__ = [
    "CellKey",
    "CellStats",
    "EmptyRecordSetError",
    "EpisodeCause",
    "EpisodeRecord",
    "EvalReport",
    "METRIC_CAUSES",
    "METRIC_FIELDS",
    "MetricsError",
    "NoPathError",
    "RateRow",
    "ShapeMismatchError",
    "ShortestPath",
    "StepLogEntry",
    "aggregate_seeds",
    "format_band",
    "mean_std",
    "rates",
    "reflex_vertices",
    "shortest_path",
    "shortest_path_length",
    "spl",
]
