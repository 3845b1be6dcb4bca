"""
Scripted Policies
=================
Closed-loop controllers used in place of a learned agent.

- straight: always NOOP.
- pure-pursuit: follows the planned route with a lookahead point.
- forecast-avoid: pure-pursuit plus a corridor test against world-space
  forecasts; steers away from the side a forecast enters the corridor from.
- pixel-avoid: the same corridor test on forecast-class pixels of the newest
  observation frame.

Bearings are positive to the right, matching the action sign.
"""

import math
from typing import Optional

import numpy as np
from shapely.geometry import LineString, Point

from ..config import PolicySettings
from ..geometry import CameraModel, Pose2D, ground_lookup, normalize_angle
from ..render import LabelClass
from ..sim import Action
from .base import BasePolicy, PolicyInput, PolicyKind, PrivilegedBundle

# Lateral offsets below this count as dead center
SIDE_EPSILON = 1e-6


def bearing_right(pose: Pose2D, target: tuple[float, float]) -> float:
    """Angle from the heading to the target in radians, positive to the right."""
    dx = target[0] - pose.position[0]
    dy = target[1] - pose.position[1]
    return -normalize_angle(math.atan2(dy, dx) - pose.heading)


def _turn_toward(direction: int, omega: float, alpha: float) -> Action:
    """TURN in ``direction`` (+1 right, -1 left); NOOP first if omega still turns the other way."""
    if omega * direction < 0:
        return Action.noop()
    return Action.turn(direction * alpha)


class StraightPolicy(BasePolicy):
    """Always drives straight."""

    kind = PolicyKind.STRAIGHT

    def act(self, policy_input: PolicyInput) -> Action:
        return Action.noop()


class PurePursuitPolicy(BasePolicy):
    """
    Steers toward a lookahead point on the planned route, with a deadband.

    A turn against a yaw rate still spinning the other way is preceded by one
    NOOP step, which zeroes omega so the new turn ramps up from rest.
    """

    kind = PolicyKind.PURE_PURSUIT
    requires_privileged = True

    def __init__(self, deadband_deg: float = 5.0, lookahead: float = 8.0):
        self.deadband = math.radians(deadband_deg)
        self.lookahead = lookahead

    @classmethod
    def from_settings(cls, settings: PolicySettings) -> "PurePursuitPolicy":
        return cls(deadband_deg=settings.deadband_deg, lookahead=settings.lookahead)

    def target(self, bundle: PrivilegedBundle) -> tuple[float, float]:
        position = bundle.agent.pose.position
        if len(bundle.route) < 2:
            return bundle.goal
        route = LineString(bundle.route)
        along = route.project(Point(position))
        point = route.interpolate(along + self.lookahead)
        if math.dist((point.x, point.y), position) < 1e-9:
            return bundle.goal
        return (point.x, point.y)

    def goal_side(self, bundle: PrivilegedBundle) -> int:
        """+1 when the route target is right of (or dead ahead of) the agent, else -1."""
        return 1 if bearing_right(bundle.agent.pose, self.target(bundle)) >= 0 else -1

    def pursue(self, bundle: PrivilegedBundle) -> Action:
        bearing = bearing_right(bundle.agent.pose, self.target(bundle))
        if abs(bearing) <= self.deadband:
            return Action.noop()
        direction = 1 if bearing > 0 else -1
        return _turn_toward(direction, bundle.agent.omega, bundle.scenario.alpha_deg)

    def act(self, policy_input: PolicyInput) -> Action:
        self.check_input(policy_input)
        assert policy_input.privileged is not None
        return self.pursue(policy_input.privileged)


class _CorridorPolicy(PurePursuitPolicy):
    """Shared corridor geometry: the agent's straight-ahead sweep over the forecast horizon."""

    def __init__(
        self,
        deadband_deg: float = 5.0,
        lookahead: float = 8.0,
        margin: float = 0.3,
        horizon: int = 5,
        stride: int = 4,
    ):
        super().__init__(deadband_deg, lookahead)
        self.margin = margin
        self.horizon = horizon
        self.stride = stride

    def corridor(self, bundle: PrivilegedBundle) -> tuple[float, float]:
        """(length, half width) in meters."""
        config = bundle.scenario
        length = bundle.agent.speed * self.horizon * self.stride * config.dt
        half_width = (2.0 * config.agent_radius + self.margin) / 2.0
        return length, half_width

    def avoid(self, bundle: PrivilegedBundle, side_of_obstacle: Optional[float]) -> Action:
        """Turn away from an obstacle at the given lateral sign, or pursue when there is none."""
        if side_of_obstacle is None:
            return self.pursue(bundle)
        if side_of_obstacle < -SIDE_EPSILON:
            direction = 1
        elif side_of_obstacle > SIDE_EPSILON:
            direction = -1
        else:
            direction = self.goal_side(bundle)
        return _turn_toward(direction, bundle.agent.omega, bundle.scenario.alpha_deg)


class ForecastAvoidPolicy(_CorridorPolicy):
    """
    Pure-pursuit that yields to world-space forecasts.

    A forecast footprint (disc of diameter w) at any offset that overlaps the
    corridor is a hit. Of every pedestrian's first hit, the nearest one
    ahead decides: the agent turns away from its lateral side; dead center
    turns toward the goal side.
    """

    kind = PolicyKind.FORECAST_AVOID

    def first_hits(self, bundle: PrivilegedBundle) -> list[tuple[float, str, float]]:
        """(longitudinal, pedestrian id, lateral) of each pedestrian's first hit."""
        length, half_width = self.corridor(bundle)
        pose = bundle.agent.pose
        hits = []
        for ped_id in sorted(bundle.forecasts):
            forecast = bundle.forecasts[ped_id]
            if len(forecast) == 0:
                continue
            centers = forecast.centers
            radii = np.array([max(b.w, 0.0) / 2.0 for b in forecast.boxes])
            local = pose.to_local(centers)
            lon, lat = local[:, 0], local[:, 1]
            dx = np.maximum.reduce([-lon, np.zeros_like(lon), lon - length])
            dy = np.maximum(np.abs(lat) - half_width, 0.0)
            inside = np.hypot(dx, dy) < radii + 1e-12
            if np.any(inside):
                k = int(np.argmax(inside))
                hits.append((float(lon[k]), ped_id, float(lat[k])))
        return sorted(hits)

    def act(self, policy_input: PolicyInput) -> Action:
        self.check_input(policy_input)
        bundle = policy_input.privileged
        assert bundle is not None
        hits = self.first_hits(bundle)
        return self.avoid(bundle, hits[0][2] if hits else None)


class PixelAvoidPolicy(_CorridorPolicy):
    """
    Pure-pursuit that yields to forecast overlays seen in the observation.

    Obstacles come only from forecast-class pixels of the newest frame whose
    ground point falls in the corridor; the route still comes from the
    privileged bundle. Ground nearer than the bottom image row is never seen,
    so the corridor reaches that blind distance further out.
    """

    kind = PolicyKind.PIXEL_AVOID
    requires_observation = True

    FORECAST_CLASSES = (LabelClass.FORECAST_BOX, LabelClass.FORECAST_PATH)

    def __init__(
        self,
        camera: CameraModel,
        deadband_deg: float = 5.0,
        lookahead: float = 8.0,
        margin: float = 0.3,
        horizon: int = 5,
        stride: int = 4,
    ):
        super().__init__(deadband_deg, lookahead, margin, horizon, stride)
        self.camera = camera
        self._mask_key: Optional[tuple[float, float]] = None
        self._mask: Optional[np.ndarray] = None

    def corridor_mask(self, length: float, half_width: float) -> np.ndarray:
        """Pixels whose ground point lies inside the corridor."""
        if self._mask is None or self._mask_key != (length, half_width):
            local, valid = ground_lookup(self.camera)
            lon, lat = local[..., 0], local[..., 1]
            blind = float(lon[valid].min()) if valid.any() else 0.0
            reach = length + blind
            self._mask = valid & (lon <= reach) & (np.abs(lat) <= half_width)
            self._mask_key = (length, half_width)
        return self._mask

    def act(self, policy_input: PolicyInput) -> Action:
        self.check_input(policy_input)
        bundle = policy_input.privileged
        assert bundle is not None and policy_input.observation is not None

        classes = policy_input.observation.newest.classes
        mask = self.corridor_mask(*self.corridor(bundle))
        hits = mask & np.isin(classes, self.FORECAST_CLASSES)
        if not hits.any():
            return self.pursue(bundle)

        _, cols = np.nonzero(hits)
        offset = float(np.mean(cols + 0.5)) - self.camera.principal_point[0]
        return self.avoid(bundle, offset)


def create_policy(
    kind: PolicyKind,
    settings: PolicySettings,
    camera: Optional[CameraModel] = None,
    horizon: int = 5,
    stride: int = 4,
) -> BasePolicy:
    """
    Build a scripted policy.

    Args:
        kind: Which policy
        settings: Deadband, lookahead and margin
        camera: Needed by pixel-avoid
        horizon: Forecast horizon H (corridor length)
        stride: Forecast stride s (corridor length)
    """
    if kind == PolicyKind.STRAIGHT:
        return StraightPolicy()
    if kind == PolicyKind.PURE_PURSUIT:
        return PurePursuitPolicy.from_settings(settings)

    corridor = dict(
        deadband_deg=settings.deadband_deg,
        lookahead=settings.lookahead,
        margin=settings.avoidance_margin,
        horizon=horizon,
        stride=stride,
    )
    if kind == PolicyKind.FORECAST_AVOID:
        return ForecastAvoidPolicy(**corridor)
    if camera is None:
        raise ValueError("pixel-avoid needs the camera model")
    return PixelAvoidPolicy(camera, **corridor)
