"""
Simulation

Scenario definition and presets, agent kinematics, pedestrian motion and
deterministic episode stepping.
"""

from .actions import Action, ActionKind, discrete_actions
from .errors import InvalidScenarioError, ScenarioError, StepAfterTerminationError
from .presets import PRESETS, get_preset
from .scenario import (
    SCHEMA_VERSION,
    PedestrianSpec,
    PoseSpec,
    RouteSpec,
    RouteSplit,
    ScenarioConfig,
    SceneGeometry,
    dump_scenario,
    load_scenario,
    scene_geometry,
)
from .world import (
    REWARD_FAILURE,
    REWARD_SUCCESS,
    AgentState,
    PedestrianState,
    StepOutcome,
    TerminationCause,
    WorldState,
    apply_action,
    check_termination,
    pedestrian_advance,
    reward_for,
    sample_scenario,
    step,
)

__all__ = [
    "Action",
    "ActionKind",
    "AgentState",
    "InvalidScenarioError",
    "PRESETS",
    "PedestrianSpec",
    "PedestrianState",
    "PoseSpec",
    "REWARD_FAILURE",
    "REWARD_SUCCESS",
    "RouteSpec",
    "RouteSplit",
    "SCHEMA_VERSION",
    "ScenarioConfig",
    "ScenarioError",
    "SceneGeometry",
    "StepAfterTerminationError",
    "StepOutcome",
    "TerminationCause",
    "WorldState",
    "apply_action",
    "check_termination",
    "discrete_actions",
    "dump_scenario",
    "get_preset",
    "load_scenario",
    "pedestrian_advance",
    "reward_for",
    "sample_scenario",
    "scene_geometry",
    "step",
]
