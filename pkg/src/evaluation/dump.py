"""
Render dumps: one paletted PNG per step of the newest observation frame,
plus a ``frames.json`` sidecar.
"""

from pathlib import Path
from typing import Optional

import structlog

from ..config import Settings
from ..policy import BasePolicy, PolicyKind, create_policy
from ..render import DumpManifest, FrameDump, save_label_png
from ..sim import ScenarioConfig
from .env import NavigationEnv
from .spec import RunSpec

logger = structlog.get_logger(__name__)


def render_dump(
    spec: RunSpec,
    config: ScenarioConfig,
    seed: int,
    steps: int,
    out_dir: Path,
    settings: Settings,
    policy: Optional[BasePolicy] = None,
) -> DumpManifest:
    """
    Drive one episode and write its frames.

    The reset frame is step 0; the dump stops after ``steps`` steps or when
    the episode ends.

    Args:
        spec: Approach, forecaster, space and policy to render
        config: Scenario, already banded
        seed: Episode seed
        steps: Maximum steps to dump
        out_dir: Output directory
        settings: Resolved settings
        policy: Policy override (bridge specs fall back to straight driving)
    """
    env = NavigationEnv(
        config,
        seed,
        settings=settings,
        mode=spec.mode,
        forecaster=spec.forecaster,
        space=spec.space,
        needs_observation=True,
    )
    if policy is None:
        kind = spec.policy_kind or PolicyKind.STRAIGHT
        forecasting = settings.forecasting
        policy = create_policy(
            kind,
            settings.policy,
            camera=env.camera,
            horizon=config.forecast_horizon or forecasting.horizon,
            stride=config.forecast_stride or forecasting.stride,
        )

    manifest = DumpManifest(
        scenario_id=config.scenario_id,
        approach=spec.approach_label,
        seed=seed,
        mode={"pedestrian_style": spec.mode.pedestrian_style.value, "overlay": spec.mode.overlay.value},
    )

    def save(step: int) -> None:
        assert env.observation is not None
        name = f"frame_{step:05d}.png"
        save_label_png(env.observation.newest, out_dir / name)
        manifest.frames.append(FrameDump(file=name, episode=0, step=step))

    policy.reset()
    policy_input = env.reset()
    save(0)
    for _ in range(steps):
        if env.done:
            break
        policy_input, _ = env.step(policy.act(policy_input))
        save(env.world.step_count)

    manifest.write(out_dir)
    logger.info("render_dump_written", out=str(out_dir), frames=len(manifest.frames))
    return manifest
