"""
Displacement Errors

ADE: mean center distance over all forecast offsets.
FDE: center distance at the final offset.
"""

from typing import Sequence, Union

import numpy as np

from .errors import EmptyForecastError, LengthMismatchError
from .track import Forecast, TrackBox

Boxes = Union[Forecast, Sequence[TrackBox]]


def _centers(boxes: Boxes) -> np.ndarray:
    if isinstance(boxes, Forecast):
        return boxes.centers
    return np.array([b.center for b in boxes], dtype=float).reshape(-1, 2)


def displacement_errors(predicted: Boxes, actual: Boxes) -> np.ndarray:
    """Per-offset Euclidean center distances."""
    pred, act = _centers(predicted), _centers(actual)
    object_id = predicted.object_id if isinstance(predicted, Forecast) else None
    if len(pred) == 0:
        raise EmptyForecastError("cannot score an empty forecast", object_id)
    if len(pred) != len(act):
        raise LengthMismatchError(f"predicted has {len(pred)} entries, actual has {len(act)}", object_id)
    return np.hypot(pred[:, 0] - act[:, 0], pred[:, 1] - act[:, 1])


def ade(predicted: Boxes, actual: Boxes) -> float:
    """Average displacement error, in the forecast's space units."""
    return float(np.mean(displacement_errors(predicted, actual)))


def fde(predicted: Boxes, actual: Boxes) -> float:
    """Final displacement error, in the forecast's space units."""
    return float(displacement_errors(predicted, actual)[-1])
