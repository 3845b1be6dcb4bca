"""
Evaluation
Episode environment, batch runner, bridge endpoint, render dumps and offline
forecast-quality evaluation.
"""

from .dump import render_dump
from .env import NavigationEnv
from .forecast_eval import (
    ForecastScore,
    TrackFileError,
    evaluate_tracks,
    read_tracks,
    write_score_table,
    write_tracks,
)
from .runner import (
    EpisodeJob,
    build_report,
    episode_seed,
    make_env,
    make_policy,
    plan_jobs,
    run_episode,
    run_job,
    run_jobs,
)
from .serve import serve_bridge
from .spec import SPACE_ALIASES, RunSpec, RunSpecError, resolve_scenario

__all__ = [
    "EpisodeJob",
    "ForecastScore",
    "NavigationEnv",
    "RunSpec",
    "RunSpecError",
    "SPACE_ALIASES",
    "TrackFileError",
    "build_report",
    "episode_seed",
    "evaluate_tracks",
    "make_env",
    "make_policy",
    "plan_jobs",
    "read_tracks",
    "render_dump",
    "resolve_scenario",
    "run_episode",
    "run_job",
    "run_jobs",
    "serve_bridge",
    "write_score_table",
    "write_tracks",
]
