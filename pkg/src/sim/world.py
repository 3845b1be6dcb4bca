"""
World Simulation
================
Agent kinematics, pedestrian motion, termination and reward, and
deterministic episode stepping.

Steering follows ``omega += alpha * kappa * dt`` with omega in deg/s. Positive
omega turns the agent right (clockwise), so the CCW heading decreases by
``omega * dt``. NOOP resets omega to zero and the agent drives straight.
"""

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Optional

import numpy as np
import structlog
from shapely.geometry import Point as ShapelyPoint

from ..geometry import Cylinder3D, Pose2D
from .actions import Action, ActionKind
from .errors import InvalidScenarioError, StepAfterTerminationError
from .scenario import PedestrianSpec, ScenarioConfig, scene_geometry

logger = structlog.get_logger(__name__)

REWARD_SUCCESS = 10.0
REWARD_FAILURE = -10.0

# Absorbs float drift in step_count * dt against the time limit
TIME_EPSILON = 1e-9


class TerminationCause(str, Enum):
    """Why an episode ended."""
    SUCCESS = "success"
    COLLISION = "collision"
    OUT_OF_BOUND = "out_of_bound"
    TIMEOUT = "timeout"


@dataclass(frozen=True)
class AgentState:
    """Agent pose, yaw rate omega (deg/s, positive = right) and constant speed (m/s)."""
    pose: Pose2D
    omega: float = 0.0
    speed: float = 6.0


@dataclass(frozen=True)
class PedestrianState:
    """
    A pedestrian walking its closed waypoint loop.

    ``waypoint_index`` is the start of the current segment and
    ``segment_offset`` the arc length already covered on it.
    """
    ped_id: str
    extent: Cylinder3D
    speed: float
    waypoint_index: int
    segment_offset: float
    waypoints: tuple[tuple[float, float], ...]

    @property
    def position(self) -> tuple[float, float]:
        return self.extent.center


@dataclass(frozen=True)
class WorldState:
    """Everything needed to advance an episode by one step."""
    agent: AgentState
    pedestrians: tuple[PedestrianState, ...]
    step_count: int
    config: ScenarioConfig
    rng: np.random.Generator = field(compare=False, repr=False)
    terminated: bool = False
    cause: Optional[TerminationCause] = None

    @property
    def elapsed(self) -> float:
        return self.step_count * self.config.dt

    def pedestrian(self, ped_id: str) -> Optional[PedestrianState]:
        for ped in self.pedestrians:
            if ped.ped_id == ped_id:
                return ped
        return None


@dataclass(frozen=True)
class StepOutcome:
    """Reward and termination flag of one step."""
    reward: float
    terminated: bool
    cause: Optional[TerminationCause] = None


# =============================================================================
# Pedestrian motion
# =============================================================================

def _segment_length(waypoints: tuple[tuple[float, float], ...], index: int) -> float:
    a = waypoints[index]
    b = waypoints[(index + 1) % len(waypoints)]
    return math.dist(a, b)


def _loop_length(waypoints: tuple[tuple[float, float], ...]) -> float:
    return sum(_segment_length(waypoints, i) for i in range(len(waypoints)))


def _walk(
    waypoints: tuple[tuple[float, float], ...], index: int, offset: float, distance: float
) -> tuple[int, float, tuple[float, float]]:
    """Move ``distance`` meters along the closed loop; returns (index, offset, position)."""
    loop = _loop_length(waypoints)
    if loop <= 0.0:
        return index, 0.0, waypoints[index]
    if distance > loop:
        distance = math.fmod(distance, loop)

    n = len(waypoints)
    remaining = distance
    while True:
        seg = _segment_length(waypoints, index)
        if seg > 0.0 and offset + remaining < seg:
            offset += remaining
            break
        remaining -= max(seg - offset, 0.0)
        index = (index + 1) % n
        offset = 0.0
        if remaining <= 0.0:
            break

    a = waypoints[index]
    b = waypoints[(index + 1) % n]
    seg = _segment_length(waypoints, index)
    t = offset / seg if seg > 0.0 else 0.0
    return index, offset, (a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]))


def pedestrian_advance(ped: PedestrianState, dt: float) -> PedestrianState:
    """
    Move a pedestrian ``speed * dt`` meters along its waypoint loop.

    After the final waypoint the pedestrian walks back to the first one.
    Distance left over at a waypoint carries onto the next segment.
    """
    distance = ped.speed * dt
    if distance <= 0.0:
        return ped
    index, offset, position = _walk(ped.waypoints, ped.waypoint_index, ped.segment_offset, distance)
    extent = Cylinder3D(center=position, radius=ped.extent.radius, height=ped.extent.height)
    return replace(ped, extent=extent, waypoint_index=index, segment_offset=offset)


def _spawn_pedestrian(spec: PedestrianSpec, rng: np.random.Generator) -> PedestrianState:
    speed = float(rng.uniform(*spec.speed_range))
    phase = float(rng.uniform(*spec.phase_range))
    index, offset, position = _walk(spec.waypoints, 0, 0.0, phase)
    return PedestrianState(
        ped_id=spec.ped_id,
        extent=Cylinder3D(center=position, radius=spec.radius, height=spec.height),
        speed=speed,
        waypoint_index=index,
        segment_offset=offset,
        waypoints=spec.waypoints,
    )


# =============================================================================
# Agent kinematics
# =============================================================================

def apply_action(
    agent: AgentState,
    action: Action,
    dt: float,
    kappa: float = 2.0,
    omega_max: float = 90.0,
) -> AgentState:
    """
    Advance the agent by one step.

    Args:
        agent: Current agent state
        action: NOOP or TURN(alpha), alpha in deg/s^2
        dt: Step length in seconds
        kappa: Steering sensitivity
        omega_max: Yaw-rate bound in deg/s

    Returns:
        New AgentState with updated omega, heading and position
    """
    if action.kind == ActionKind.TURN:
        omega = agent.omega + action.alpha * kappa * dt
        omega = min(max(omega, -omega_max), omega_max)
        # omega ramps linearly within the step
        yaw = 0.5 * (agent.omega + omega) * dt
    else:
        omega = 0.0
        yaw = 0.0

    heading = agent.pose.heading - math.radians(yaw)
    step = agent.speed * dt
    x = agent.pose.position[0] + step * math.cos(heading)
    y = agent.pose.position[1] + step * math.sin(heading)
    return AgentState(pose=Pose2D((x, y), heading), omega=omega, speed=agent.speed)


# =============================================================================
# Episodes
# =============================================================================

def sample_scenario(config: ScenarioConfig, seed: int) -> WorldState:
    """
    Create the initial world for one episode.

    Pedestrian speeds (and start phases) are drawn uniformly from their spec
    ranges with a generator seeded by ``seed``.

    Raises:
        InvalidScenarioError: If the start pose is not drivable or overlaps a
            boundary, or the goal lies off the drivable region
    """
    geometry = scene_geometry(config)
    sx, sy = config.start.x, config.start.y

    if not geometry.is_drivable(sx, sy):
        raise InvalidScenarioError(f"start ({sx}, {sy}) is not on the drivable region", config.scenario_id)
    if not geometry.boundary.is_empty and geometry.boundary.intersects(
        ShapelyPoint(sx, sy).buffer(config.agent_radius)
    ):
        raise InvalidScenarioError(f"start ({sx}, {sy}) overlaps a boundary region", config.scenario_id)
    if not geometry.is_drivable(*config.goal):
        raise InvalidScenarioError(f"goal {config.goal} is not on the drivable region", config.scenario_id)

    rng = np.random.default_rng(seed)
    pedestrians = tuple(_spawn_pedestrian(spec, rng) for spec in config.pedestrians)
    agent = AgentState(
        pose=Pose2D((sx, sy), math.radians(config.start.heading_deg)),
        omega=0.0,
        speed=config.speed,
    )
    return WorldState(agent=agent, pedestrians=pedestrians, step_count=0, config=config, rng=rng)


def check_termination(world: WorldState, config: Optional[ScenarioConfig] = None) -> Optional[TerminationCause]:
    """
    Evaluate termination on a post-step state.

    Priority: collision > out_of_bound > success > timeout.
    """
    config = config or world.config
    ax, ay = world.agent.pose.position

    for ped in world.pedestrians:
        if math.dist((ax, ay), ped.position) < config.agent_radius + ped.extent.radius:
            return TerminationCause.COLLISION

    if not scene_geometry(config).is_drivable(ax, ay):
        return TerminationCause.OUT_OF_BOUND

    if math.dist((ax, ay), config.goal) <= config.goal_radius:
        return TerminationCause.SUCCESS

    if world.step_count * config.dt >= config.time_limit - TIME_EPSILON:
        return TerminationCause.TIMEOUT

    return None


def reward_for(cause: Optional[TerminationCause]) -> float:
    if cause is None:
        return 0.0
    return REWARD_SUCCESS if cause == TerminationCause.SUCCESS else REWARD_FAILURE


def step(world: WorldState, action: Action) -> tuple[WorldState, StepOutcome]:
    """
    Apply one action, advance pedestrians and the clock, then score the step.

    Raises:
        StepAfterTerminationError: If the episode already ended
    """
    config = world.config
    if world.terminated:
        raise StepAfterTerminationError(
            f"episode ended with '{world.cause.value if world.cause else None}' at step {world.step_count}",
            config.scenario_id,
        )

    agent = apply_action(world.agent, action, config.dt, config.kappa, config.omega_max_deg)
    pedestrians = tuple(pedestrian_advance(p, config.dt) for p in world.pedestrians)
    advanced = replace(world, agent=agent, pedestrians=pedestrians, step_count=world.step_count + 1)

    cause = check_termination(advanced, config)
    if cause is not None:
        advanced = replace(advanced, terminated=True, cause=cause)
    return advanced, StepOutcome(reward=reward_for(cause), terminated=cause is not None, cause=cause)
