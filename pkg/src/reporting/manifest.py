"""
Run Manifest
============
Everything needed to re-derive a report: resolved settings, run specs,
scenario configs, their combined hash, and package versions.
"""

import json
from dataclasses import dataclass, field
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path
from typing import Any, Sequence

import structlog

from .. import __version__
from ..config import ConfigError, Settings, config_hash, settings_from_resolved
from ..evaluation import RunSpec
from ..sim import ScenarioConfig

logger = structlog.get_logger(__name__)

MANIFEST_VERSION = "1"

TRACKED_PACKAGES = (
    "numpy",
    "shapely",
    "networkx",
    "scikit-image",
    "pillow",
    "pydantic",
    "pydantic-settings",
    "pyyaml",
    "structlog",
)


def package_versions() -> dict[str, str]:
    versions = {"visual-forecast-nav": __version__}
    for name in TRACKED_PACKAGES:
        try:
            versions[name] = version(name)
        except PackageNotFoundError:
            versions[name] = "not installed"
    return versions


@dataclass
class RunManifest:
    """Reproducibility record of one evaluation run."""
    settings: dict[str, Any]
    specs: list[dict[str, Any]]
    scenarios: list[dict[str, Any]]
    versions: dict[str, str] = field(default_factory=package_versions)

    @classmethod
    def build(
        cls, settings: Settings, specs: Sequence[RunSpec], scenarios: Sequence[ScenarioConfig]
    ) -> "RunManifest":
        return cls(
            settings=settings.resolved(),
            specs=[spec.model_dump(mode="json") for spec in specs],
            scenarios=[scenario.model_dump(mode="json") for scenario in scenarios],
        )

    @property
    def config_hash(self) -> str:
        """SHA-256 over settings, specs and scenarios (versions excluded)."""
        return config_hash({"settings": self.settings, "specs": self.specs, "scenarios": self.scenarios})

    def to_dict(self) -> dict[str, Any]:
        return {
            "manifest_version": MANIFEST_VERSION,
            "config_hash": self.config_hash,
            "settings": self.settings,
            "specs": self.specs,
            "scenarios": self.scenarios,
            "versions": self.versions,
        }

    def write(self, path: Path) -> Path:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w") as f:
            f.write(json.dumps(self.to_dict(), indent=2, sort_keys=True))
            f.write("\n")
        logger.info("manifest_written", path=str(path), config_hash=self.config_hash[:12])
        return path

    # Re-derivation

    def resolved_settings(self) -> Settings:
        return settings_from_resolved(self.settings)

    def run_specs(self) -> list[RunSpec]:
        return [RunSpec.build(**spec) for spec in self.specs]

    def scenario_configs(self) -> list[ScenarioConfig]:
        return [ScenarioConfig.model_validate(data) for data in self.scenarios]


def load_manifest(path: Path) -> RunManifest:
    """
    Read a manifest written by ``RunManifest.write`` (or embedded in report.json).

    Raises:
        ConfigError: If the file is not a manifest or its hash does not match
        OSError: If the file cannot be read
    """
    with open(path, "r") as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as e:
            raise ConfigError(f"Manifest is not valid JSON: {e}", path=str(path)) from e

    if "manifest" in data and "config_hash" not in data:
        data = data["manifest"]
    try:
        manifest = RunManifest(
            settings=data["settings"],
            specs=data["specs"],
            scenarios=data["scenarios"],
            versions=data.get("versions", {}),
        )
    except (KeyError, TypeError) as e:
        raise ConfigError(f"Manifest is missing {e}", path=str(path)) from e

    if data.get("config_hash") != manifest.config_hash:
        raise ConfigError("Manifest config hash does not match its contents", path=str(path))
    return manifest
