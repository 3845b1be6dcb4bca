"""
Batch Runner
============
Expands run specs into seeded episode jobs, runs them (optionally on a thread
pool) and reduces the records into a report.

Job order is (spec, seed, episode index) and results come back in that order
whatever the thread count, so reports do not depend on parallelism. Episode
seeds are derived from (run seed, episode index) with numpy's SeedSequence.
"""

import asyncio
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np
import structlog

from ..config import Settings
from ..metrics import EpisodeRecord, EvalReport, aggregate_seeds
from ..policy import BasePolicy, create_policy
from ..policy.bridge import SubprocessTransport, bridge_session
from ..sim import ScenarioConfig
from .env import NavigationEnv
from .spec import RunSpec, RunSpecError

logger = structlog.get_logger(__name__)


@dataclass(frozen=True)
class EpisodeJob:
    """One episode of one spec."""
    spec_index: int
    spec: RunSpec
    config: ScenarioConfig
    run_seed: int
    episode: int
    seed: int
    route_id: Optional[str] = None


def episode_seed(run_seed: int, episode: int) -> int:
    """Deterministic 32-bit episode seed."""
    return int(np.random.SeedSequence([run_seed, episode]).generate_state(1)[0])


def plan_jobs(specs: Sequence[RunSpec], scenarios: Sequence[ScenarioConfig]) -> list[EpisodeJob]:
    """
    Every (spec, seed, episode) combination in report order.

    Episode i of a cell uses route i mod |routes in the run spec's split|; the
    spec's speed band replaces the scenario's pedestrian speeds.

    Raises:
        RunSpecError: If a spec asks for a route split its scenario lacks, or two
            specs map to the same report cell
    """
    keys = [spec.cell_key(scenario.scenario_id) for spec, scenario in zip(specs, scenarios)]
    if len(set(keys)) != len(keys):
        raise RunSpecError("two run specs map to the same report cell")

    jobs = []
    for index, (spec, scenario) in enumerate(zip(specs, scenarios)):
        banded = scenario.with_speed_range(*spec.speed_band)
        route_ids = banded.route_ids(spec.route_split)
        if spec.route_split is not None and not route_ids:
            raise RunSpecError(
                f"scenario '{scenario.scenario_id}' has no '{spec.route_split.value}' routes", "route_split"
            )
        for run_seed in spec.seeds:
            for episode in range(spec.episodes):
                route_id = route_ids[episode % len(route_ids)] if route_ids else None
                config = banded.for_route(route_id) if route_id else banded
                jobs.append(EpisodeJob(
                    spec_index=index,
                    spec=spec,
                    config=config,
                    run_seed=run_seed,
                    episode=episode,
                    seed=episode_seed(run_seed, episode),
                    route_id=route_id,
                ))
    return jobs


def make_env(job: EpisodeJob, settings: Settings, log_steps: bool = False) -> NavigationEnv:
    spec = job.spec
    return NavigationEnv(
        job.config,
        job.seed,
        settings=settings,
        mode=spec.mode,
        forecaster=spec.forecaster,
        space=spec.space,
        episode=job.episode,
        route_id=job.route_id,
        needs_observation=spec.needs_observation,
        needs_privileged=not spec.is_bridge,
        log_steps=log_steps,
    )


def make_policy(job: EpisodeJob, env: NavigationEnv) -> BasePolicy:
    kind = job.spec.policy_kind
    assert kind is not None
    forecasting = env.settings.forecasting
    return create_policy(
        kind,
        env.settings.policy,
        camera=env.camera,
        horizon=job.config.forecast_horizon or forecasting.horizon,
        stride=job.config.forecast_stride or forecasting.stride,
    )


def run_episode(env: NavigationEnv, policy: BasePolicy) -> EpisodeRecord:
    """Closed loop until the episode terminates."""
    policy.reset()
    policy_input = env.reset()
    while not env.done:
        policy_input, _ = env.step(policy.act(policy_input))
    return env.record()


async def _run_bridge_episode(env: NavigationEnv, command: str, timeout: float) -> EpisodeRecord:
    transport = await SubprocessTransport.spawn(command)
    try:
        return await bridge_session(transport, env, timeout)
    finally:
        await transport.close()


def run_job(job: EpisodeJob, settings: Settings, log_steps: bool = False) -> EpisodeRecord:
    env = make_env(job, settings, log_steps)
    if job.spec.is_bridge:
        record = asyncio.run(_run_bridge_episode(env, job.spec.bridge_command, settings.policy.bridge_timeout))
    else:
        record = run_episode(env, make_policy(job, env))
    logger.debug("job_finished", spec=job.spec_index, seed=job.run_seed, episode=job.episode,
                 cause=record.cause.value)
    return record


def run_jobs(
    jobs: Sequence[EpisodeJob],
    settings: Settings,
    threads: int = 1,
    log_steps: bool = False,
) -> list[EpisodeRecord]:
    """Run jobs, returning records in job order."""
    logger.info("run_started", jobs=len(jobs), threads=threads)
    if threads <= 1:
        records = [run_job(job, settings, log_steps) for job in jobs]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            records = list(pool.map(lambda job: run_job(job, settings, log_steps), jobs))
    logger.info("run_finished", jobs=len(jobs),
                protocol_errors=sum(1 for r in records if not r.counts_for_metrics))
    return records


def build_report(
    specs: Sequence[RunSpec],
    scenarios: Sequence[ScenarioConfig],
    jobs: Iterable[EpisodeJob],
    records: Iterable[EpisodeRecord],
) -> EvalReport:
    """
    Serial reduction of records into one report cell per spec.

    Each cell holds the mean and sample standard deviation over the run spec's seeds.
    """
    per_seed: dict[tuple[int, int], list[EpisodeRecord]] = {}
    for job, record in zip(jobs, records):
        per_seed.setdefault((job.spec_index, job.run_seed), []).append(record)

    report = EvalReport()
    for index, (spec, scenario) in enumerate(zip(specs, scenarios)):
        key = spec.cell_key(scenario.scenario_id)
        seed_reports = [
            EvalReport.from_records([(key, per_seed.get((index, seed), []))]) for seed in spec.seeds
        ]
        report.cells[key] = aggregate_seeds(seed_reports).cells[key]
    return report
