"""
Constant Velocity Model

Linear extrapolation of the last observed velocity. With ``window > 2`` the
velocity is the least-squares slope over the newest ``window`` samples.
"""

import numpy as np

from .errors import InsufficientHistoryError
from .track import Forecast, ForecastAlgorithm, ForecastEntry, ForecastSpace, TrackBox, TrackHistory, forecast_offsets


def _velocity(steps: np.ndarray, values: np.ndarray, window: int) -> np.ndarray:
    if window <= 2 or len(steps) == 2:
        return (values[-1] - values[-2]) / (steps[-1] - steps[-2])
    steps, values = steps[-window:], values[-window:]
    slope, _ = np.polyfit(steps - steps[-1], values, 1)
    return slope


def cvm_forecast(history: TrackHistory, horizon: int, stride: int, window: int = 2) -> Forecast:
    """
    Forecast a track by constant-velocity extrapolation.

    Velocity is (last - previous) / (step gap). Offsets are counted from the
    last sample. In world space the extent (w, h) is held constant.

    Args:
        history: Track with at least two samples
        horizon: Number of forecast entries H
        stride: Steps between entries s
        window: Samples used for the velocity estimate (2 = last two)

    Raises:
        InsufficientHistoryError: If the track has fewer than two samples
    """
    if len(history) < 2:
        raise InsufficientHistoryError(
            f"CVM needs 2 samples, track has {len(history)}", history.object_id
        )

    steps = history.steps()
    values = history.values()
    velocity = _velocity(steps, values, window)
    if history.space == ForecastSpace.WORLD:
        velocity[2:] = 0.0

    last = values[-1]
    entries = tuple(
        ForecastEntry(offset, TrackBox.from_array(last + offset * velocity).floored())
        for offset in forecast_offsets(horizon, stride)
    )
    return Forecast(history.object_id, ForecastAlgorithm.CVM, history.space, entries)
