"""
Base Policy

Abstract interface for all policies, and the inputs they receive.
Scripted policies may read a privileged world-space bundle; external
(bridge) policies only ever see the observation stack.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Optional

from ..forecasting import Forecast
from ..render import ObservationStack
from ..sim import Action, AgentState, ScenarioConfig
from .errors import PolicyError

Point = tuple[float, float]


class PolicyKind(str, Enum):
    """Built-in policies."""
    STRAIGHT = "straight"
    PURE_PURSUIT = "pure-pursuit"
    FORECAST_AVOID = "forecast-avoid"
    PIXEL_AVOID = "pixel-avoid"


@dataclass(frozen=True)
class PrivilegedBundle:
    """World-space state handed to scripted policies."""
    agent: AgentState
    goal: Point
    route: tuple[Point, ...]
    pedestrians: Mapping[str, Point]
    forecasts: Mapping[str, Forecast]
    scenario: ScenarioConfig
    step: int = 0


@dataclass(frozen=True)
class PolicyInput:
    observation: Optional[ObservationStack] = None
    privileged: Optional[PrivilegedBundle] = field(default=None, repr=False)


class BasePolicy(ABC):
    """
    Abstract base class for policies.

    ``act`` must be deterministic given the policy state and the input.
    """

    kind: PolicyKind
    requires_observation: bool = False
    requires_privileged: bool = False

    @property
    def name(self) -> str:
        return self.kind.value

    def reset(self) -> None:
        """Called at the start of every episode."""
        pass

    def check_input(self, policy_input: PolicyInput) -> None:
        if self.requires_observation and policy_input.observation is None:
            raise PolicyError("policy needs an observation", self.name)
        if self.requires_privileged and policy_input.privileged is None:
            raise PolicyError("policy needs the privileged bundle", self.name)

    @abstractmethod
    def act(self, policy_input: PolicyInput) -> Action:
        """
        Choose the next action.

        Args:
            policy_input: Observation and/or privileged bundle

        Returns:
            A valid Action
        """
        pass
