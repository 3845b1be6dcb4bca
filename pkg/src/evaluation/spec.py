"""
Run Specifications

A RunSpec names one evaluation cell: scenario (preset or file), approach,
forecaster, forecast space, policy and speed band, plus how many episodes
and seeds to run it for.
"""

from pathlib import Path
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from ..forecasting import ForecastAlgorithm, ForecastSpace
from ..metrics import CellKey, format_band
from ..policy import PolicyKind
from ..render import APPROACHES, OverlayKind, RenderMode
from ..sim import PRESETS, RouteSplit, ScenarioConfig, get_preset, load_scenario

BRIDGE_PREFIX = "bridge:"

# CLI spelling of forecast spaces
SPACE_ALIASES = {"3d": ForecastSpace.WORLD, "2d": ForecastSpace.IMAGE}


class RunSpecError(Exception):
    """Invalid run specification."""

    def __init__(self, message: str, field: Optional[str] = None):
        super().__init__(message)
        self.field = field


class RunSpec(BaseModel):
    """One evaluation cell and its repetition counts."""
    model_config = ConfigDict(extra="forbid", frozen=True)

    scenario: str
    approach: str = "seg"
    forecaster: Optional[ForecastAlgorithm] = None
    space: ForecastSpace = ForecastSpace.WORLD
    policy: str = PolicyKind.PURE_PURSUIT.value
    speed_band: tuple[float, float] = (0.6, 1.2)
    route_split: Optional[RouteSplit] = None
    episodes: int = Field(50, ge=1)
    seeds: tuple[int, ...] = Field((1, 2, 3), min_length=1)

    @field_validator("approach")
    @classmethod
    def _known_approach(cls, value: str) -> str:
        if value not in APPROACHES:
            raise ValueError(f"unknown approach '{value}', expected one of {sorted(APPROACHES)}")
        return value

    @field_validator("policy")
    @classmethod
    def _known_policy(cls, value: str) -> str:
        if value.startswith(BRIDGE_PREFIX):
            if not value[len(BRIDGE_PREFIX):].strip():
                raise ValueError("bridge policy needs a command")
            return value
        PolicyKind(value)
        return value

    @field_validator("speed_band")
    @classmethod
    def _ordered_band(cls, value: tuple[float, float]) -> tuple[float, float]:
        low, high = value
        if low < 0 or low > high:
            raise ValueError(f"invalid speed band {value}")
        return value

    @field_validator("seeds")
    @classmethod
    def _distinct_seeds(cls, value: tuple[int, ...]) -> tuple[int, ...]:
        if len(set(value)) != len(value):
            raise ValueError(f"seeds must be distinct, got {value}")
        return value

    @model_validator(mode="after")
    def _overlay_needs_forecaster(self) -> "RunSpec":
        if self.mode.overlay != OverlayKind.NONE and self.forecaster is None:
            raise ValueError(f"approach '{self.approach}' draws forecasts but no forecaster is set")
        return self

    @classmethod
    def build(cls, **fields) -> "RunSpec":
        """
        Validate a spec from loose fields (CLI flags, manifests).

        Raises:
            RunSpecError: If the fields do not form a valid spec
        """
        try:
            return cls(**fields)
        except ValidationError as e:
            raise RunSpecError(f"invalid run spec: {e}") from e

    # Derived views

    @property
    def mode(self) -> RenderMode:
        return APPROACHES[self.approach]

    @property
    def is_bridge(self) -> bool:
        return self.policy.startswith(BRIDGE_PREFIX)

    @property
    def bridge_command(self) -> str:
        return self.policy[len(BRIDGE_PREFIX):].strip()

    @property
    def policy_kind(self) -> Optional[PolicyKind]:
        return None if self.is_bridge else PolicyKind(self.policy)

    @property
    def needs_observation(self) -> bool:
        return self.is_bridge or self.policy_kind == PolicyKind.PIXEL_AVOID

    @property
    def approach_label(self) -> str:
        """Approach column of a report: render approach, forecaster/space, policy."""
        label = self.approach
        if self.forecaster is not None:
            space = "3d" if self.space == ForecastSpace.WORLD else "2d"
            label += f"/{self.forecaster.value}-{space}"
        policy = "bridge" if self.is_bridge else self.policy
        return f"{label}@{policy}"

    def cell_key(self, scenario_id: str) -> CellKey:
        scenario_set = scenario_id if self.route_split is None else f"{scenario_id}/{self.route_split.value}"
        return CellKey(scenario_set, format_band(*self.speed_band), self.approach_label)


def resolve_scenario(name: str) -> ScenarioConfig:
    """
    Preset by name, otherwise a JSON scenario file.

    Raises:
        RunSpecError: If the name is neither a preset nor an existing file
        ScenarioError: If the file does not hold a valid scenario
    """
    if name in PRESETS:
        return get_preset(name)
    if not Path(name).exists():
        raise RunSpecError(f"'{name}' is neither a preset ({', '.join(sorted(PRESETS))}) nor a file", "scenario")
    return load_scenario(name)
