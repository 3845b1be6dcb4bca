"""
Navigation Environment
======================
Gym-style wrapper tying one seeded episode together: world stepping,
per-episode forecasting, observation rendering and the inputs handed to a
policy.

Observations are rendered only when the consumer reads pixels (pixel policy,
bridge, render dumps); privileged scripted policies skip rendering.
"""

from typing import Optional

import numpy as np
import structlog

from ..config import Settings
from ..forecasting import (
    Forecast,
    ForecastAlgorithm,
    ForecastSpace,
    ForecastTracker,
    TrackBox,
    ade,
    fde,
    lift_forecast,
)
from ..geometry import CameraModel
from ..metrics import EpisodeCause, EpisodeRecord, StepLogEntry, shortest_path
from ..policy import PolicyInput, PrivilegedBundle
from ..render import (
    LabelImage,
    ObservationStack,
    OverlayKind,
    Painter,
    RenderMode,
    push_frame,
    render_observation,
)
from ..sim import (
    Action,
    ScenarioConfig,
    StepAfterTerminationError,
    StepOutcome,
    WorldState,
    sample_scenario,
)
from ..sim import step as sim_step

logger = structlog.get_logger(__name__)


class NavigationEnv:
    """
    One seeded episode of a scenario.

    Args:
        config: Scenario (already specialized to a route and speed band)
        seed: Episode seed
        settings: Resolved settings
        mode: Render mode (pedestrian style and overlay)
        forecaster: Forecast algorithm, None for no forecasts
        space: Forecast space
        episode: Episode index within its cell
        route_id: Route the config was specialized to
        needs_observation: Render observation stacks
        needs_privileged: Build the privileged bundle
        log_steps: Keep a per-step log in the record
        painter: Optional extra painter (guidance hook)
    """

    def __init__(
        self,
        config: ScenarioConfig,
        seed: int,
        settings: Optional[Settings] = None,
        mode: RenderMode = RenderMode(),
        forecaster: Optional[ForecastAlgorithm] = None,
        space: ForecastSpace = ForecastSpace.WORLD,
        episode: int = 0,
        route_id: Optional[str] = None,
        needs_observation: bool = False,
        needs_privileged: bool = True,
        log_steps: bool = False,
        painter: Optional[Painter] = None,
    ):
        if mode.overlay != OverlayKind.NONE and forecaster is None:
            raise ValueError(f"overlay '{mode.overlay.value}' needs a forecaster")

        self.config = config
        self.seed = seed
        self.settings = settings or Settings()
        self.mode = mode
        self.space = space
        self.episode = episode
        self.route_id = route_id
        self.needs_observation = needs_observation
        self.needs_privileged = needs_privileged
        self.log_steps = log_steps
        self.painter = painter
        self.camera = CameraModel.from_settings(self.settings.camera)

        self.tracker: Optional[ForecastTracker] = None
        if forecaster is not None:
            self.tracker = ForecastTracker.from_settings(
                forecaster,
                space,
                self.camera,
                self.settings.forecasting,
                horizon=config.forecast_horizon,
                stride=config.forecast_stride,
            )

        self._world: Optional[WorldState] = None
        self._stack: Optional[ObservationStack] = None
        self._forecasts: dict[str, Forecast] = {}
        self._route: tuple[tuple[float, float], ...] = ()
        self._path_length = 0.0
        self._aborted = False
        self._step_log: list[StepLogEntry] = []
        self._issued: list[tuple[int, dict[str, Forecast]]] = []
        self._measured: dict[int, dict[str, TrackBox]] = {}

    # -------------------------------------------------------------------------
    # State
    # -------------------------------------------------------------------------

    @property
    def world(self) -> WorldState:
        if self._world is None:
            raise RuntimeError("call reset() before using the environment")
        return self._world

    @property
    def observation(self) -> Optional[ObservationStack]:
        return self._stack

    @property
    def forecasts(self) -> dict[str, Forecast]:
        """Forecasts issued at the current step, in the tracker's space."""
        return dict(self._forecasts)

    @property
    def done(self) -> bool:
        return self._aborted or (self._world is not None and self._world.terminated)

    @property
    def scores_forecasts(self) -> bool:
        return self.tracker is not None and self.space == ForecastSpace.WORLD

    # -------------------------------------------------------------------------
    # Episode loop
    # -------------------------------------------------------------------------

    def reset(self) -> PolicyInput:
        """Sample the episode and return the first policy input."""
        self._world = sample_scenario(self.config, self.seed)
        self._path_length = 0.0
        self._aborted = False
        self._step_log = []
        self._issued = []
        self._measured = {}
        if self.tracker is not None:
            self.tracker.reset()
        if self.needs_privileged:
            self._route = shortest_path(self.config, self.settings.policy.route_clearance).waypoints

        self._update_forecasts()
        self._stack = ObservationStack.reset(self.render()) if self.needs_observation else None
        return self._policy_input()

    def step(self, action: Action) -> tuple[PolicyInput, StepOutcome]:
        """
        Advance one step.

        Raises:
            StepAfterTerminationError: If the episode already ended or was aborted
        """
        if self._aborted:
            raise StepAfterTerminationError("episode was aborted", self.config.scenario_id)
        self._world, outcome = sim_step(self.world, action)
        world = self._world
        self._path_length += world.agent.speed * self.config.dt

        if self.log_steps:
            pose = world.agent.pose
            self._step_log.append(StepLogEntry(
                step=world.step_count,
                action=action.kind.value,
                alpha=action.alpha,
                reward=outcome.reward,
                x=float(pose.position[0]),
                y=float(pose.position[1]),
                heading=float(pose.heading),
            ))

        self._update_forecasts()
        if self._stack is not None:
            self._stack = push_frame(self._stack, self.render())
        return self._policy_input(), outcome

    def abort(self) -> None:
        """End the episode as a protocol error."""
        self._aborted = True

    def render(self) -> LabelImage:
        """Newest observation frame for the current world."""
        return render_observation(self.world, self.camera, self.mode, self._forecasts, self.painter)

    def record(self) -> EpisodeRecord:
        """
        Record of the finished episode.

        Raises:
            RuntimeError: If the episode is still running
        """
        world = self.world
        if self._aborted:
            cause = EpisodeCause.PROTOCOL_ERROR
        elif world.cause is not None:
            cause = EpisodeCause.from_termination(world.cause)
        else:
            raise RuntimeError("episode is still running")

        errors = self._forecast_errors() if self.scores_forecasts else None
        record = EpisodeRecord(
            cause=cause,
            shortest_path=shortest_path(self.config).length,
            path_length=self._path_length,
            steps=world.step_count,
            seed=self.seed,
            scenario_id=self.config.scenario_id,
            episode=self.episode,
            route_id=self.route_id,
            ade=errors[0] if errors else None,
            fde=errors[1] if errors else None,
            step_log=tuple(self._step_log),
        )
        logger.debug("episode_finished", scenario_id=record.scenario_id, seed=record.seed,
                     episode=record.episode, cause=cause.value, steps=record.steps)
        return record

    # -------------------------------------------------------------------------
    # Internals
    # -------------------------------------------------------------------------

    def _update_forecasts(self) -> None:
        if self.tracker is None:
            return
        world = self.world
        measured = self.tracker.observe(world)
        self._forecasts = self.tracker.forecasts(world)
        if self.scores_forecasts:
            self._measured[world.step_count] = measured
            if self._forecasts:
                self._issued.append((world.step_count, dict(self._forecasts)))

    def _forecast_errors(self) -> Optional[tuple[float, float]]:
        """Mean ADE and FDE over forecasts whose whole horizon was observed."""
        ades, fdes = [], []
        for issued_at, forecasts in self._issued:
            for ped_id, forecast in forecasts.items():
                found = [self._measured.get(issued_at + offset, {}).get(ped_id) for offset in forecast.offsets]
                actual = [box for box in found if box is not None]
                if len(actual) != len(found):
                    continue
                ades.append(ade(forecast, actual))
                fdes.append(fde(forecast, actual))
        if not ades:
            return None
        return float(np.mean(ades)), float(np.mean(fdes))

    def _world_forecasts(self) -> dict[str, Forecast]:
        if self.space == ForecastSpace.WORLD:
            return dict(self._forecasts)
        pose = self.world.agent.pose
        lifted = {}
        for ped_id, forecast in self._forecasts.items():
            world_forecast = lift_forecast(self.camera, pose, forecast)
            if world_forecast is not None:
                lifted[ped_id] = world_forecast
        return lifted

    def _policy_input(self) -> PolicyInput:
        if not self.needs_privileged:
            return PolicyInput(observation=self._stack)
        world = self.world
        bundle = PrivilegedBundle(
            agent=world.agent,
            goal=tuple(self.config.goal),
            route=self._route,
            pedestrians={p.ped_id: p.position for p in world.pedestrians},
            forecasts=self._world_forecasts(),
            scenario=self.config,
            step=world.step_count,
        )
        return PolicyInput(observation=self._stack, privileged=bundle)
