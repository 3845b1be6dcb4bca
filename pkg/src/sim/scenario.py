"""
Scenario Definition
===================
Scenario configuration (roads, sidewalks, start/goal, pedestrians, agent
constants), JSON scenario files, and the cached shapely geometry used for
containment tests.

Scenario files match ScenarioConfig field-for-field, carry a
``schema_version`` and reject unknown fields.
"""

import json
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from pathlib import Path
from typing import Literal, Optional

import numpy as np
import shapely
import structlog
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator
from shapely.geometry import Polygon
from shapely.geometry.base import BaseGeometry
from shapely.ops import unary_union

from .errors import InvalidScenarioError, ScenarioError

logger = structlog.get_logger(__name__)

SCHEMA_VERSION = "1"

Point = tuple[float, float]
PolygonCoords = tuple[Point, ...]


class RouteSplit(str, Enum):
    """Route sets: seen routes are the training combinations, unseen are held out."""
    SEEN = "seen"
    UNSEEN = "unseen"


class PoseSpec(BaseModel):
    """Start pose as written in scenario files (heading in degrees, CCW from +x)."""
    model_config = ConfigDict(extra="forbid", frozen=True)

    x: float
    y: float
    heading_deg: float = 0.0


class RouteSpec(BaseModel):
    """A start/goal combination."""
    model_config = ConfigDict(extra="forbid", frozen=True)

    route_id: str
    split: RouteSplit = RouteSplit.SEEN
    start: PoseSpec
    goal: Point


class PedestrianSpec(BaseModel):
    """A pedestrian looping along a waypoint polyline."""
    model_config = ConfigDict(extra="forbid", frozen=True)

    ped_id: str
    waypoints: tuple[Point, ...] = Field(min_length=2)
    speed_range: tuple[float, float] = (0.6, 1.2)
    radius: float = Field(0.3, gt=0)
    height: float = Field(1.7, gt=0)
    phase_range: tuple[float, float] = (0.0, 0.0)

    @field_validator("speed_range", "phase_range")
    @classmethod
    def _ordered_range(cls, value: tuple[float, float]) -> tuple[float, float]:
        low, high = value
        if low < 0 or low > high:
            raise ValueError(f"range must satisfy 0 <= min <= max, got {value}")
        return value


class ScenarioConfig(BaseModel):
    """
    Complete scenario parameterization.

    Units: meters, seconds, degrees. ``alpha_deg`` is the TURN magnitude in
    deg/s^2, ``omega_max_deg`` bounds the yaw rate in deg/s.
    """
    model_config = ConfigDict(extra="forbid", frozen=True)

    schema_version: Literal["1"]
    scenario_id: str

    roads: tuple[PolygonCoords, ...] = Field(min_length=1)
    boundaries: tuple[PolygonCoords, ...] = ()

    start: PoseSpec
    goal: Point
    goal_radius: float = Field(2.0, gt=0)
    routes: tuple[RouteSpec, ...] = ()

    pedestrians: tuple[PedestrianSpec, ...] = ()

    time_limit: float = Field(30.0, gt=0)
    dt: float = Field(0.05, gt=0)
    speed: float = Field(6.0, ge=0)
    alpha_deg: float = Field(35.0, ge=0)
    kappa: float = Field(2.0, ge=0)
    omega_max_deg: float = Field(90.0, gt=0)
    agent_radius: float = Field(0.5, gt=0)

    # None defers to the forecasting settings
    forecast_horizon: Optional[int] = Field(None, ge=1)
    forecast_stride: Optional[int] = Field(None, ge=1)

    @field_validator("roads", "boundaries")
    @classmethod
    def _polygons_have_area(cls, polygons: tuple[PolygonCoords, ...]) -> tuple[PolygonCoords, ...]:
        for coords in polygons:
            if len(coords) < 3:
                raise ValueError("polygons need at least 3 vertices")
        return polygons

    @model_validator(mode="after")
    def _unique_ids(self) -> "ScenarioConfig":
        ped_ids = [p.ped_id for p in self.pedestrians]
        if len(set(ped_ids)) != len(ped_ids):
            raise ValueError("pedestrian ids must be unique")
        route_ids = [r.route_id for r in self.routes]
        if len(set(route_ids)) != len(route_ids):
            raise ValueError("route ids must be unique")
        return self

    # Derived copies

    def with_speed_range(self, low: float, high: float) -> "ScenarioConfig":
        """Copy with every pedestrian's speed range replaced (evaluation speed bands)."""
        if low < 0 or low > high:
            raise InvalidScenarioError(f"invalid speed band [{low}, {high}]", self.scenario_id)
        peds = tuple(p.model_copy(update={"speed_range": (low, high)}) for p in self.pedestrians)
        return self.model_copy(update={"pedestrians": peds})

    def for_route(self, route_id: str) -> "ScenarioConfig":
        """Copy with start and goal taken from a named route."""
        for route in self.routes:
            if route.route_id == route_id:
                return self.model_copy(update={"start": route.start, "goal": route.goal})
        raise InvalidScenarioError(f"unknown route '{route_id}'", self.scenario_id)

    def route_ids(self, split: Optional[RouteSplit] = None) -> list[str]:
        """Route ids in declaration order, optionally filtered by split."""
        return [r.route_id for r in self.routes if split is None or r.split == split]


@dataclass(frozen=True)
class SceneGeometry:
    """Shapely view of the static scene."""
    road: BaseGeometry
    boundary: BaseGeometry
    drivable: BaseGeometry

    def is_drivable(self, x: float, y: float) -> bool:
        return bool(shapely.intersects_xy(self.drivable, x, y))

    def road_mask(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        return shapely.intersects_xy(self.road, xs, ys)

    def boundary_mask(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        if self.boundary.is_empty:
            return np.zeros(np.shape(xs), dtype=bool)
        return shapely.intersects_xy(self.boundary, xs, ys)


@lru_cache(maxsize=64)
def build_geometry(
    roads: tuple[PolygonCoords, ...], boundaries: tuple[PolygonCoords, ...]
) -> SceneGeometry:
    """Union the polygons and prepare them for repeated containment queries."""
    road = unary_union([Polygon(coords).buffer(0) for coords in roads])
    boundary = unary_union([Polygon(coords).buffer(0) for coords in boundaries]) if boundaries else Polygon()
    drivable = road.difference(boundary) if not boundary.is_empty else road
    for geom in (road, boundary, drivable):
        shapely.prepare(geom)
    return SceneGeometry(road=road, boundary=boundary, drivable=drivable)


def scene_geometry(config: ScenarioConfig) -> SceneGeometry:
    return build_geometry(config.roads, config.boundaries)


# =============================================================================
# Scenario files
# =============================================================================

def load_scenario(path: str) -> ScenarioConfig:
    """
    Load a JSON scenario file.

    Raises:
        ScenarioError: If the file is not valid JSON or does not match the schema
        OSError: If the file cannot be read
    """
    with open(path, "r") as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as e:
            raise ScenarioError(f"Scenario file {path} is not valid JSON: {e}") from e

    if not isinstance(data, dict) or "schema_version" not in data:
        raise ScenarioError(f"Scenario file {path} has no schema_version")

    try:
        config = ScenarioConfig.model_validate(data)
    except ValidationError as e:
        raise ScenarioError(f"Scenario file {path} does not match the schema: {e}") from e

    logger.info("scenario_loaded", path=path, scenario_id=config.scenario_id,
                pedestrians=len(config.pedestrians), routes=len(config.routes))
    return config


def dump_scenario(config: ScenarioConfig, path: str) -> None:
    """Write a scenario as canonical JSON."""
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as f:
        f.write(json.dumps(config.model_dump(mode="json"), indent=2, sort_keys=True))
        f.write("\n")
