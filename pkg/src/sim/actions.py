"""
Agent Actions

NOOP drives straight; TURN(alpha) feeds a signed angular acceleration into
the steering integrator. Positive alpha turns right, negative turns left.
"""

from dataclasses import dataclass
from enum import Enum


class ActionKind(str, Enum):
    """Discrete action kinds."""
    NOOP = "noop"
    TURN = "turn"


@dataclass(frozen=True)
class Action:
    """Action with its signed angular acceleration in deg/s^2 (0 for NOOP)."""
    kind: ActionKind
    alpha: float = 0.0

    def __post_init__(self) -> None:
        if self.kind == ActionKind.NOOP and self.alpha != 0.0:
            raise ValueError(f"NOOP carries no alpha, got {self.alpha}")

    @classmethod
    def noop(cls) -> "Action":
        return cls(ActionKind.NOOP)

    @classmethod
    def turn(cls, alpha: float) -> "Action":
        return cls(ActionKind.TURN, float(alpha))

    @property
    def alpha_sign(self) -> int:
        return (self.alpha > 0) - (self.alpha < 0)


def discrete_actions(alpha: float) -> tuple[Action, Action, Action]:
    """The discretized action set {NOOP, TURN(-alpha), TURN(+alpha)}."""
    return (Action.noop(), Action.turn(-alpha), Action.turn(alpha))
