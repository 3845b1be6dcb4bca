"""
Settings
========
Typed configuration for every tunable constant of the simulator.

Values come from ``config/defaults.yaml`` (or a user supplied YAML file),
validated by pydantic. Process-level knobs (``VF_THREADS``, ``VF_LOG_LEVEL``)
are read from the environment or a ``.env`` file.
"""

import hashlib
import json
from pathlib import Path
from typing import Any, Optional

import structlog
import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, ValidationInfo
from pydantic_settings import BaseSettings, SettingsConfigDict

logger = structlog.get_logger(__name__)

DEFAULT_CONFIG_PATH = Path(__file__).parent.parent / "config" / "defaults.yaml"


class ConfigError(Exception):
    """Raised when a settings file cannot be parsed or validated."""

    def __init__(self, message: str, path: Optional[str] = None):
        super().__init__(message)
        self.path = path


class CameraSettings(BaseModel):
    """Pinhole camera mounted on the agent."""
    model_config = ConfigDict(extra="forbid", frozen=True)

    mount_height: float = Field(1.2, gt=0)
    pitch_deg: float = 0.0
    horizontal_fov_deg: float = Field(90.0, gt=0, lt=180)
    image_width: int = Field(180, gt=0)
    image_height: int = Field(84, gt=0)
    near_plane: float = Field(0.1, gt=0)
    circle_samples: int = Field(32, ge=4)
    max_ground_distance: float = Field(80.0, gt=0)


class ForecastSettings(BaseModel):
    """Forecast horizon and filter tuning."""
    model_config = ConfigDict(extra="forbid", frozen=True)

    horizon: int = Field(5, ge=1)
    stride: int = Field(4, ge=1)
    history_window: int = Field(8, ge=2)
    cvm_window: int = Field(2, ge=2)

    # Kalman filter noise (per frame)
    q_position: float = Field(1e-2, ge=0)
    q_size: float = Field(1e-2, ge=0)
    q_velocity: float = Field(1e-4, ge=0)
    r_measurement: float = Field(1e-2, ge=0)
    initial_velocity_variance: float = Field(1.0, gt=0)
    psd_tolerance: float = Field(1e-9, gt=0)

    @field_validator("cvm_window")
    @classmethod
    def _window_fits_history(cls, value: int, info: ValidationInfo) -> int:
        history = info.data.get("history_window", 8)
        if value > history:
            raise ValueError(f"cvm_window ({value}) exceeds history_window ({history})")
        return value


class PolicySettings(BaseModel):
    """Scripted policy constants and bridge limits."""
    model_config = ConfigDict(extra="forbid", frozen=True)

    deadband_deg: float = Field(5.0, ge=0)
    avoidance_margin: float = Field(0.3, ge=0)
    lookahead: float = Field(8.0, gt=0)
    route_clearance: float = Field(3.0, ge=0)
    bridge_timeout: float = Field(10.0, gt=0)


class EvaluationSettings(BaseModel):
    """Defaults for batch evaluation runs."""
    model_config = ConfigDict(extra="forbid", frozen=True)

    episodes: int = Field(50, ge=1)
    seeds: tuple[int, ...] = (1, 2, 3)
    speed_bands: tuple[tuple[float, float], ...] = ((0.3, 0.6), (0.6, 1.2), (1.2, 1.5))

    @field_validator("speed_bands")
    @classmethod
    def _bands_ordered(cls, bands: tuple[tuple[float, float], ...]) -> tuple[tuple[float, float], ...]:
        for low, high in bands:
            if low > high or low < 0:
                raise ValueError(f"invalid speed band [{low}, {high}]")
        return bands


class Settings(BaseSettings):
    """
    Complete runtime configuration.

    Groups are loaded from YAML; ``threads`` and ``log_level`` may be set with
    ``VF_THREADS`` / ``VF_LOG_LEVEL``.
    """
    model_config = SettingsConfigDict(
        env_prefix="VF_",
        env_file=".env",
        extra="ignore",
        frozen=True,
    )

    camera: CameraSettings = CameraSettings()
    forecasting: ForecastSettings = ForecastSettings()
    policy: PolicySettings = PolicySettings()
    evaluation: EvaluationSettings = EvaluationSettings()

    threads: int = Field(1, ge=1)
    log_level: str = "INFO"

    def resolved(self) -> dict[str, Any]:
        """Settings that influence results (process knobs excluded)."""
        return self.model_dump(mode="json", exclude={"threads", "log_level"})

    def digest(self) -> str:
        """SHA-256 of the canonical JSON of the resolved settings."""
        return config_hash(self.resolved())


def config_hash(payload: Any) -> str:
    """Hash a JSON-serializable payload in canonical form."""
    canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


def load_settings(config_path: Optional[str] = None) -> Settings:
    """
    Load settings from YAML.

    Args:
        config_path: Optional YAML path. Defaults to ``config/defaults.yaml``.

    Returns:
        Validated Settings

    Raises:
        ConfigError: If the file exists but is malformed or fails validation
    """
    path = Path(config_path) if config_path else DEFAULT_CONFIG_PATH

    if not path.exists():
        if config_path:
            raise ConfigError(f"Settings file not found: {path}", path=str(path))
        logger.warning("settings_file_missing", path=str(path), fallback="built-in defaults")
        return Settings()

    try:
        with open(path, "r") as f:
            data = yaml.safe_load(f) or {}
    except yaml.YAMLError as e:
        raise ConfigError(f"Could not parse settings: {e}", path=str(path)) from e

    try:
        settings = Settings(**data)
    except ValidationError as e:
        raise ConfigError(f"Invalid settings in {path}: {e}", path=str(path)) from e

    logger.debug("settings_loaded", path=str(path), digest=settings.digest()[:12])
    return settings


def settings_from_resolved(data: dict[str, Any]) -> Settings:
    """Rebuild Settings from the ``resolved()`` form stored in a manifest."""
    try:
        return Settings(**data)
    except ValidationError as e:
        raise ConfigError(f"Invalid settings in manifest: {e}") from e

