"""
Kalman Filter
=============
Linear constant-velocity filter over the 8-dimensional state
``(cx, cy, w, h, vcx, vcy, vw, vh)``. The same filter serves world-space and
image-space tracks; units follow the track.

Noise is specified per frame. A predict over ``k`` frames uses ``F(k)`` and
``k * Q``.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..config import ForecastSettings
from .errors import NumericalDegeneracyError
from .track import Forecast, ForecastAlgorithm, ForecastEntry, ForecastSpace, TrackBox, forecast_offsets

STATE_DIM = 8
MEASUREMENT_DIM = 4

H_MATRIX = np.hstack([np.eye(MEASUREMENT_DIM), np.zeros((MEASUREMENT_DIM, MEASUREMENT_DIM))])


@dataclass(frozen=True)
class KalmanParams:
    """Per-frame noise levels and the PSD check tolerance."""
    q_position: float = 1e-2
    q_size: float = 1e-2
    q_velocity: float = 1e-4
    r_measurement: float = 1e-2
    initial_velocity_variance: float = 1.0
    psd_tolerance: float = 1e-9

    @classmethod
    def from_settings(cls, settings: ForecastSettings) -> "KalmanParams":
        return cls(
            q_position=settings.q_position,
            q_size=settings.q_size,
            q_velocity=settings.q_velocity,
            r_measurement=settings.r_measurement,
            initial_velocity_variance=settings.initial_velocity_variance,
            psd_tolerance=settings.psd_tolerance,
        )

    def process_noise(self, frames: int = 1) -> np.ndarray:
        q = [self.q_position] * 2 + [self.q_size] * 2 + [self.q_velocity] * 4
        return np.diag(q) * float(frames)

    def measurement_noise(self) -> np.ndarray:
        return np.eye(MEASUREMENT_DIM) * self.r_measurement


DEFAULT_PARAMS = KalmanParams()


@dataclass(frozen=True, eq=False)
class KalmanState:
    """Filter mean (8,) and covariance (8, 8)."""
    mean: np.ndarray
    cov: np.ndarray

    @property
    def box(self) -> TrackBox:
        return TrackBox.from_array(self.mean[:MEASUREMENT_DIM])

    @property
    def velocity(self) -> np.ndarray:
        return self.mean[MEASUREMENT_DIM:].copy()


def transition(frames: int = 1) -> np.ndarray:
    """Constant-velocity transition over ``frames`` steps."""
    F = np.eye(STATE_DIM)
    F[:MEASUREMENT_DIM, MEASUREMENT_DIM:] = np.eye(MEASUREMENT_DIM) * float(frames)
    return F


def _check_covariance(cov: np.ndarray, tolerance: float) -> None:
    if not np.all(np.isfinite(cov)):
        raise NumericalDegeneracyError("covariance has non-finite entries")
    if np.max(np.abs(cov - cov.T)) > tolerance:
        raise NumericalDegeneracyError("covariance lost symmetry")
    if np.linalg.eigvalsh(cov).min() < -tolerance:
        raise NumericalDegeneracyError("covariance is not positive semi-definite")


def kf_init(measurement: TrackBox, params: KalmanParams = DEFAULT_PARAMS) -> KalmanState:
    """
    Start a filter at a first measurement with zero velocity.

    Position and size variances start at the measurement noise, velocities at
    ``initial_velocity_variance``.
    """
    mean = np.concatenate([measurement.as_array(), np.zeros(MEASUREMENT_DIM)])
    variances = [params.r_measurement] * MEASUREMENT_DIM + [params.initial_velocity_variance] * MEASUREMENT_DIM
    return KalmanState(mean=mean, cov=np.diag(variances).astype(float))


def kf_predict(state: KalmanState, frames: int = 1, params: Optional[KalmanParams] = DEFAULT_PARAMS) -> KalmanState:
    """Propagate mean and covariance; ``params=None`` skips process noise."""
    F = transition(frames)
    cov = F @ state.cov @ F.T
    if params is not None:
        cov = cov + params.process_noise(frames)
    return KalmanState(mean=F @ state.mean, cov=cov)


def kf_step(
    state: KalmanState,
    measurement: TrackBox,
    frames: int = 1,
    params: KalmanParams = DEFAULT_PARAMS,
) -> KalmanState:
    """
    One predict over ``frames`` steps followed by one measurement update.

    The covariance update uses the Joseph form and is re-symmetrized, then
    checked for symmetry and PSD within ``params.psd_tolerance``.

    Raises:
        NumericalDegeneracyError: If the innovation covariance is singular or
            the updated covariance is not symmetric PSD
    """
    predicted = kf_predict(state, frames, params)
    P = predicted.cov
    R = params.measurement_noise()

    innovation = measurement.as_array() - H_MATRIX @ predicted.mean
    S = H_MATRIX @ P @ H_MATRIX.T + R
    try:
        # K = P H^T S^-1, solved rather than inverted
        gain = np.linalg.solve(S, H_MATRIX @ P).T
    except np.linalg.LinAlgError as e:
        raise NumericalDegeneracyError(f"innovation covariance is singular: {e}") from e

    mean = predicted.mean + gain @ innovation
    I_KH = np.eye(STATE_DIM) - gain @ H_MATRIX
    cov = I_KH @ P @ I_KH.T + gain @ R @ gain.T  # Joseph form
    cov = 0.5 * (cov + cov.T)
    _check_covariance(cov, params.psd_tolerance)
    return KalmanState(mean=mean, cov=cov)


def kf_forecast(
    state: KalmanState,
    horizon: int,
    stride: int,
    object_id: str = "",
    space: ForecastSpace = ForecastSpace.WORLD,
) -> Forecast:
    """
    Noise-free mean predictions at offsets {s, ..., H*s}.

    Negative predicted sizes are floored at zero in the emitted boxes.
    """
    F = transition(stride)
    mean = state.mean
    entries = []
    for offset in forecast_offsets(horizon, stride):
        mean = F @ mean
        entries.append(ForecastEntry(offset, TrackBox.from_array(mean[:MEASUREMENT_DIM]).floored()))
    return Forecast(object_id, ForecastAlgorithm.KF, space, tuple(entries))
