"""
Forecasting

Track histories and future-box prediction by constant velocity, Kalman
filter or simulator ground truth, in world or image space.
"""

from .cvm import cvm_forecast
from .errors import (
    EmptyForecastError,
    ForecastError,
    InsufficientHistoryError,
    LengthMismatchError,
    NumericalDegeneracyError,
    UnknownObjectError,
)
from .ground_truth import gt_forecast
from .kalman import KalmanParams, KalmanState, kf_forecast, kf_init, kf_predict, kf_step, transition
from .projection import lift_box, lift_forecast, project_box, project_forecast
from .scoring import ade, displacement_errors, fde
from .synthetic import TrackRow, generate_tracks
from .track import (
    Forecast,
    ForecastAlgorithm,
    ForecastEntry,
    ForecastSpace,
    TrackBox,
    TrackHistory,
    forecast_offsets,
)
from .tracker import ForecastTracker

__all__ = [
    "EmptyForecastError",
    "Forecast",
    "ForecastAlgorithm",
    "ForecastEntry",
    "ForecastError",
    "ForecastSpace",
    "ForecastTracker",
    "InsufficientHistoryError",
    "KalmanParams",
    "KalmanState",
    "LengthMismatchError",
    "NumericalDegeneracyError",
    "TrackBox",
    "TrackHistory",
    "TrackRow",
    "UnknownObjectError",
    "ade",
    "cvm_forecast",
    "displacement_errors",
    "fde",
    "forecast_offsets",
    "generate_tracks",
    "gt_forecast",
    "kf_forecast",
    "kf_init",
    "kf_predict",
    "kf_step",
    "lift_box",
    "lift_forecast",
    "project_box",
    "project_forecast",
    "transition",
]
