"""
Episode Forecast Tracker
========================
Keeps one track history (and one Kalman filter when needed) per pedestrian
over an episode and produces the current forecasts each step.

Only pedestrians observed at the current step with at least two samples get a
forecast. In image space a pedestrian is observed when its projected box is
in view.
"""

from dataclasses import dataclass, field
from typing import Optional

import structlog

from ..config import ForecastSettings
from ..geometry import CameraModel, project_cylinder
from ..sim import WorldState
from .cvm import cvm_forecast
from .errors import NumericalDegeneracyError
from .ground_truth import gt_forecast
from .kalman import KalmanParams, KalmanState, kf_forecast, kf_init, kf_step
from .track import Forecast, ForecastAlgorithm, ForecastSpace, TrackBox, TrackHistory

logger = structlog.get_logger(__name__)


@dataclass
class _Track:
    history: TrackHistory
    filter: Optional[KalmanState] = None
    filter_step: int = -1


@dataclass
class ForecastTracker:
    """Per-episode forecaster state."""
    algorithm: ForecastAlgorithm
    space: ForecastSpace
    camera: CameraModel
    horizon: int = 5
    stride: int = 4
    history_window: int = 8
    cvm_window: int = 2
    params: KalmanParams = field(default_factory=KalmanParams)

    _tracks: dict[str, _Track] = field(default_factory=dict, init=False, repr=False)
    _observed: dict[str, TrackBox] = field(default_factory=dict, init=False, repr=False)
    _step: int = field(default=-1, init=False, repr=False)

    @classmethod
    def from_settings(
        cls,
        algorithm: ForecastAlgorithm,
        space: ForecastSpace,
        camera: CameraModel,
        settings: ForecastSettings,
        horizon: Optional[int] = None,
        stride: Optional[int] = None,
    ) -> "ForecastTracker":
        return cls(
            algorithm=algorithm,
            space=space,
            camera=camera,
            horizon=horizon or settings.horizon,
            stride=stride or settings.stride,
            history_window=settings.history_window,
            cvm_window=settings.cvm_window,
            params=KalmanParams.from_settings(settings),
        )

    def reset(self) -> None:
        self._tracks.clear()
        self._observed.clear()
        self._step = -1

    def _measure(self, world: WorldState) -> dict[str, TrackBox]:
        measured = {}
        for ped in world.pedestrians:
            if self.space == ForecastSpace.WORLD:
                measured[ped.ped_id] = TrackBox.from_cylinder(ped.extent)
                continue
            box = project_cylinder(self.camera, world.agent.pose, ped.extent)
            if box is not None:
                measured[ped.ped_id] = TrackBox.from_bbox(box)
        return measured

    def observe(self, world: WorldState) -> dict[str, TrackBox]:
        """Record this step's measurements; returns them keyed by pedestrian id."""
        step = world.step_count
        self._step = step
        self._observed = self._measure(world)

        for ped_id, box in self._observed.items():
            track = self._tracks.get(ped_id)
            if track is None:
                track = _Track(TrackHistory(ped_id, self.space, self.history_window))
                self._tracks[ped_id] = track
            track.history.append(step, box)

            if self.algorithm != ForecastAlgorithm.KF:
                continue
            if track.filter is None:
                track.filter = kf_init(box, self.params)
            else:
                try:
                    track.filter = kf_step(track.filter, box, step - track.filter_step, self.params)
                except NumericalDegeneracyError as e:
                    logger.warning("kalman_reinitialized", ped_id=ped_id, step=step, error=str(e))
                    track.filter = kf_init(box, self.params)
            track.filter_step = step

        return dict(self._observed)

    @property
    def observed(self) -> dict[str, TrackBox]:
        return dict(self._observed)

    def forecasts(self, world: WorldState) -> dict[str, Forecast]:
        """Forecasts for every pedestrian observed at the current step."""
        result: dict[str, Forecast] = {}
        for ped_id in self._observed:
            track = self._tracks[ped_id]
            if len(track.history) < 2:
                continue

            forecast: Optional[Forecast]
            if self.algorithm == ForecastAlgorithm.CVM:
                forecast = cvm_forecast(track.history, self.horizon, self.stride, self.cvm_window)
            elif self.algorithm == ForecastAlgorithm.KF:
                assert track.filter is not None
                forecast = kf_forecast(track.filter, self.horizon, self.stride, ped_id, self.space)
            else:
                forecast = gt_forecast(world, ped_id, self.horizon, self.stride, self.space, self.camera)

            if forecast is not None:
                result[ped_id] = forecast
        return result
