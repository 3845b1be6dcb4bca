"""
Shared fixtures: default settings, the default camera and a few small
scenarios that keep episodes short.
"""

import pytest

from src.config import Settings
from src.geometry import CameraModel
from src.sim import SCHEMA_VERSION, PedestrianSpec, PoseSpec, ScenarioConfig, get_preset


@pytest.fixture
def settings() -> Settings:
    return Settings()


@pytest.fixture
def camera() -> CameraModel:
    return CameraModel()


@pytest.fixture
def straight_road() -> ScenarioConfig:
    """10 m wide straight road, goal 50 m ahead, no pedestrians."""
    return ScenarioConfig(
        schema_version=SCHEMA_VERSION,
        scenario_id="straight",
        roads=(((-5.0, -5.0), (100.0, -5.0), (100.0, 5.0), (-5.0, 5.0)),),
        start=PoseSpec(x=0.0, y=0.0, heading_deg=0.0),
        goal=(50.0, 0.0),
        goal_radius=2.0,
        time_limit=30.0,
        dt=0.1,
        speed=5.0,
    )


@pytest.fixture
def standing_pedestrian() -> PedestrianSpec:
    """Pedestrian that never moves, 10 m ahead of the straight-road start."""
    return PedestrianSpec(ped_id="p0", waypoints=((10.0, 0.0), (10.0, 1.0)), speed_range=(0.0, 0.0))


@pytest.fixture
def s_turn() -> ScenarioConfig:
    return get_preset("s-turn")


@pytest.fixture
def urban_grid() -> ScenarioConfig:
    return get_preset("urban-grid")
