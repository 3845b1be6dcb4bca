"""
Episode Records
"""

from dataclasses import asdict, dataclass
from enum import Enum
from typing import Any, Optional

from ..sim import TerminationCause

# Slack for path-length consistency checks
PATH_EPSILON = 1e-6


class EpisodeCause(str, Enum):
    """Episode outcome. ``protocol_error`` episodes are excluded from metrics."""
    SUCCESS = "success"
    COLLISION = "collision"
    OUT_OF_BOUND = "out_of_bound"
    TIMEOUT = "timeout"
    PROTOCOL_ERROR = "protocol_error"

    @classmethod
    def from_termination(cls, cause: TerminationCause) -> "EpisodeCause":
        return cls(cause.value)


METRIC_CAUSES = (
    EpisodeCause.SUCCESS,
    EpisodeCause.COLLISION,
    EpisodeCause.OUT_OF_BOUND,
    EpisodeCause.TIMEOUT,
)


@dataclass(frozen=True)
class StepLogEntry:
    """One step of an optional per-episode log."""
    step: int
    action: str
    alpha: float
    reward: float
    x: float
    y: float
    heading: float


@dataclass(frozen=True)
class EpisodeRecord:
    """
    Outcome of one episode.

    Attributes:
        cause: Why the episode ended
        shortest_path: l, shortest drivable path start -> goal (meters)
        path_length: p, path actually driven (meters)
        steps: Steps taken
        seed: Episode seed
        scenario_id: Scenario the episode ran in
        ade, fde: Mean online displacement error of world-space forecasts, when scored
    """
    cause: EpisodeCause
    shortest_path: float
    path_length: float
    steps: int
    seed: int
    scenario_id: str
    episode: int = 0
    route_id: Optional[str] = None
    ade: Optional[float] = None
    fde: Optional[float] = None
    step_log: tuple[StepLogEntry, ...] = ()

    def __post_init__(self) -> None:
        if self.shortest_path <= 0:
            raise ValueError(f"shortest path must be > 0, got {self.shortest_path}")
        if self.path_length < 0:
            raise ValueError(f"path length must be >= 0, got {self.path_length}")

    @property
    def success(self) -> bool:
        return self.cause == EpisodeCause.SUCCESS

    @property
    def counts_for_metrics(self) -> bool:
        return self.cause != EpisodeCause.PROTOCOL_ERROR

    def is_consistent(self, speed: float, dt: float) -> bool:
        """p >= v * dt * steps (within PATH_EPSILON)."""
        return self.path_length >= speed * dt * self.steps - PATH_EPSILON

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["cause"] = self.cause.value
        if not self.step_log:
            data.pop("step_log")
        for name in ("ade", "fde"):
            if data[name] is None:
                data.pop(name)
        return data
