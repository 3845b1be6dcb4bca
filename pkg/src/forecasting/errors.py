"""
Forecasting Errors
"""

from typing import Optional


class ForecastError(Exception):
    """Base error for track histories, filters and forecast scoring."""

    def __init__(self, message: str, object_id: Optional[str] = None):
        super().__init__(message)
        self.object_id = object_id


class InsufficientHistoryError(ForecastError):
    """Fewer than two samples in a track history."""
    pass


class NumericalDegeneracyError(ForecastError):
    """Innovation covariance not invertible, or covariance no longer symmetric PSD."""
    pass


class UnknownObjectError(ForecastError):
    """No pedestrian with the requested id exists in the world."""
    pass


class LengthMismatchError(ForecastError):
    """Predicted and actual sequences have different lengths."""
    pass


class EmptyForecastError(ForecastError):
    """A forecast with no entries was scored."""
    pass
