"""
Command Line Interface
======================
vfnav eval           Batch closed-loop evaluation -> report.csv / report.json / manifest.json
vfnav forecast-eval  ADE/FDE of CVM, KF and GT forecasts on a track CSV or synthetic tracks
vfnav render-dump    Paletted PNG frames of one episode
vfnav bridge-serve   Run episodes for an external policy connecting over TCP

Exit codes: 0 success, 2 invalid spec or config, 3 I/O error, 4 protocol error
in at least one episode.
"""

import argparse
import asyncio
import sys
from itertools import product
from pathlib import Path
from typing import Optional, Sequence

import structlog

from . import __version__
from .config import ConfigError, Settings, load_settings
from .evaluation import (
    SPACE_ALIASES,
    RunSpec,
    RunSpecError,
    TrackFileError,
    build_report,
    episode_seed,
    evaluate_tracks,
    plan_jobs,
    read_tracks,
    render_dump,
    resolve_scenario,
    run_jobs,
    serve_bridge,
    write_score_table,
    write_tracks,
)
from .evaluation.runner import EpisodeJob
from .forecasting import ForecastAlgorithm, generate_tracks
from .logging_config import configure_logging
from .metrics import EpisodeRecord, EvalReport, NoPathError
from .policy import PolicyKind
from .render import APPROACHES, OverlayKind
from .reporting import EpisodeLog, RunManifest, load_manifest, write_reports
from .sim import RouteSplit, ScenarioConfig, ScenarioError

logger = structlog.get_logger(__name__)

EXIT_OK = 0
EXIT_INVALID_SPEC = 2
EXIT_IO = 3
EXIT_PROTOCOL = 4

FORECASTER_CHOICES = ["none"] + [a.value for a in ForecastAlgorithm]
POLICY_HELP = f"{', '.join(k.value for k in PolicyKind)} or bridge:<command>"


# =============================================================================
# Argument parsing
# =============================================================================

def parse_band(value: str) -> tuple[float, float]:
    """'0.6-1.2' -> (0.6, 1.2)"""
    low, sep, high = value.partition("-")
    try:
        if not sep:
            raise ValueError
        return float(low), float(high)
    except ValueError:
        raise argparse.ArgumentTypeError(f"speed band must look like LOW-HIGH, got '{value}'") from None


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="settings YAML (default: config/defaults.yaml)")
    parser.add_argument("--log-level", help="override VF_LOG_LEVEL")
    parser.add_argument("--json-logs", action="store_true", help="log JSON lines to stderr")


def _add_spec_flags(parser: argparse.ArgumentParser, multi: bool) -> None:
    nargs = "+" if multi else None
    parser.add_argument("--scenario", default="s-turn", nargs=nargs, help="preset name or scenario JSON file")
    parser.add_argument("--approach", default="seg", nargs=nargs, choices=sorted(APPROACHES))
    parser.add_argument("--forecaster", choices=FORECASTER_CHOICES,
                        help="default: cvm for overlay approaches, none otherwise")
    parser.add_argument("--space", choices=sorted(SPACE_ALIASES), default="3d")
    parser.add_argument("--speed-band", type=parse_band, nargs=nargs,
                        help="pedestrian speed band LOW-HIGH in m/s (default: configured bands)")
    parser.add_argument("--route-split", choices=[s.value for s in RouteSplit])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vfnav", description="Visual forecasting navigation simulator")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="batch closed-loop evaluation")
    _add_common(p_eval)
    _add_spec_flags(p_eval, multi=True)
    p_eval.add_argument("--policy", default=PolicyKind.PURE_PURSUIT.value, help=POLICY_HELP)
    p_eval.add_argument("--seeds", type=int, nargs="+")
    p_eval.add_argument("--episodes", type=int)
    p_eval.add_argument("--out", type=Path, required=True)
    p_eval.add_argument("--manifest", type=Path, help="re-run the specs of a manifest or report.json")
    p_eval.add_argument("--log-steps", action="store_true", help="keep per-step logs in episodes.jsonl")
    p_eval.add_argument("--threads", type=int, help="override VF_THREADS")

    p_fc = sub.add_parser("forecast-eval", help="ADE/FDE table for CVM, KF and GT")
    _add_common(p_fc)
    source = p_fc.add_mutually_exclusive_group()
    source.add_argument("--tracks", type=Path, help="track CSV (object_id, step, cx, cy, w, h)")
    source.add_argument("--synthetic", type=int, default=100, help="number of synthetic tracks")
    p_fc.add_argument("--seed", type=int, default=0)
    p_fc.add_argument("--noise", type=float, default=0.05, help="synthetic position noise (m)")
    p_fc.add_argument("--horizon", type=int)
    p_fc.add_argument("--stride", type=int)
    p_fc.add_argument("--space", choices=sorted(SPACE_ALIASES), default="3d")
    p_fc.add_argument("--out", type=Path, required=True)

    p_dump = sub.add_parser("render-dump", help="PNG frames of one episode")
    _add_common(p_dump)
    _add_spec_flags(p_dump, multi=False)
    p_dump.add_argument("--policy", default=PolicyKind.STRAIGHT.value, help=POLICY_HELP)
    p_dump.add_argument("--seed", type=int, default=1)
    p_dump.add_argument("--episode", type=int, default=0)
    p_dump.add_argument("--steps", type=int, default=100)
    p_dump.add_argument("--out", type=Path, required=True)

    p_serve = sub.add_parser("bridge-serve", help="serve episodes to an external policy over TCP")
    _add_common(p_serve)
    _add_spec_flags(p_serve, multi=False)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=5555)
    p_serve.add_argument("--seeds", type=int, nargs="+")
    p_serve.add_argument("--episodes", type=int)
    p_serve.add_argument("--out", type=Path, required=True)
    p_serve.add_argument("--log-steps", action="store_true")

    return parser


# =============================================================================
# Spec assembly
# =============================================================================

def _as_list(value: object) -> list:
    if value is None:
        return [None]
    return value if isinstance(value, list) else [value]


def specs_from_args(args: argparse.Namespace, settings: Settings, policy: str) -> list[RunSpec]:
    """
    Cross product of scenarios x speed bands x approaches.

    Raises:
        RunSpecError: If any combination is invalid
    """
    evaluation = settings.evaluation
    if args.speed_band is None:
        bands = list(evaluation.speed_bands)
    elif isinstance(args.speed_band, list):
        bands = args.speed_band
    else:
        bands = [args.speed_band]
    seeds = tuple(getattr(args, "seeds", None) or evaluation.seeds)
    episodes = getattr(args, "episodes", None) or evaluation.episodes

    specs = []
    for scenario, band, approach in product(_as_list(args.scenario), bands, _as_list(args.approach)):
        if args.forecaster is None:
            overlay = APPROACHES[approach].overlay
            forecaster = ForecastAlgorithm.CVM.value if overlay != OverlayKind.NONE else None
        else:
            forecaster = None if args.forecaster == "none" else args.forecaster
        specs.append(RunSpec.build(
            scenario=scenario,
            approach=approach,
            forecaster=forecaster,
            space=SPACE_ALIASES[args.space],
            policy=policy,
            speed_band=tuple(band),
            route_split=args.route_split,
            episodes=episodes,
            seeds=seeds,
        ))
    return specs


def _scenarios(specs: Sequence[RunSpec]) -> list[ScenarioConfig]:
    cache: dict[str, ScenarioConfig] = {}
    for spec in specs:
        if spec.scenario not in cache:
            cache[spec.scenario] = resolve_scenario(spec.scenario)
    return [cache[spec.scenario] for spec in specs]


# =============================================================================
# Commands
# =============================================================================

def _finish_run(
    out: Path,
    settings: Settings,
    specs: Sequence[RunSpec],
    scenarios: Sequence[ScenarioConfig],
    jobs: Sequence[EpisodeJob],
    records: Sequence[EpisodeRecord],
) -> int:
    manifest = RunManifest.build(settings, specs, scenarios)
    report: EvalReport = build_report(specs, scenarios, jobs, records)

    log = EpisodeLog(out / "episodes.jsonl", manifest.config_hash)
    for job, record in zip(jobs, records):
        log.append(record, cell=job.spec.cell_key(scenarios[job.spec_index].scenario_id)._asdict())
    write_reports(report, out, manifest)

    print(report.get_report(), file=sys.stderr)
    if report.protocol_errors:
        logger.error("protocol_errors", count=report.protocol_errors)
        return EXIT_PROTOCOL
    return EXIT_OK


def cmd_eval(args: argparse.Namespace, settings: Settings) -> int:
    if args.manifest is not None:
        manifest = load_manifest(args.manifest)
        settings = manifest.resolved_settings()
        specs = manifest.run_specs()
        scenarios = manifest.scenario_configs()
        logger.info("manifest_loaded", path=str(args.manifest), config_hash=manifest.config_hash[:12])
    else:
        specs = specs_from_args(args, settings, args.policy)
        scenarios = _scenarios(specs)

    jobs = plan_jobs(specs, scenarios)
    threads = args.threads or settings.threads
    records = run_jobs(jobs, settings, threads=threads, log_steps=args.log_steps)
    return _finish_run(args.out, settings, specs, scenarios, jobs, records)


def cmd_forecast_eval(args: argparse.Namespace, settings: Settings) -> int:
    forecasting = settings.forecasting
    if args.tracks is not None:
        rows = read_tracks(args.tracks)
    else:
        rows = generate_tracks(
            count=args.synthetic,
            seed=args.seed,
            stride=args.stride or forecasting.stride,
            history=forecasting.history_window,
            future=args.horizon or forecasting.horizon,
            noise_sigma=args.noise,
        )
        write_tracks(rows, args.out / "tracks.csv")

    scores = evaluate_tracks(rows, forecasting, args.horizon, args.stride, SPACE_ALIASES[args.space])
    write_score_table(scores, args.out / "forecast_eval.csv")

    lines = ["=" * 44, f"{'algorithm':<12}{'ADE':>10}{'FDE':>10}{'samples':>12}", "-" * 44]
    for score in scores:
        lines.append(f"{score.algorithm.value:<12}{score.ade:>10.4f}{score.fde:>10.4f}{score.samples:>12}")
    lines.append("=" * 44)
    print("\n".join(lines), file=sys.stderr)
    return EXIT_OK


def cmd_render_dump(args: argparse.Namespace, settings: Settings) -> int:
    spec = specs_from_args(args, settings, args.policy)[0]
    scenario = resolve_scenario(spec.scenario)
    config = scenario.with_speed_range(*spec.speed_band)
    route_ids = config.route_ids(spec.route_split)
    if route_ids:
        config = config.for_route(route_ids[args.episode % len(route_ids)])
    render_dump(spec, config, episode_seed(args.seed, args.episode), args.steps, args.out, settings)
    return EXIT_OK


def cmd_bridge_serve(args: argparse.Namespace, settings: Settings) -> int:
    endpoint = f"bridge:tcp://{args.host}:{args.port}"
    specs = specs_from_args(args, settings, endpoint)
    scenarios = _scenarios(specs)
    jobs = plan_jobs(specs, scenarios)

    def listening(port: int) -> None:
        print(f"listening on {args.host}:{port}", file=sys.stderr, flush=True)

    records = asyncio.run(serve_bridge(jobs, settings, args.host, args.port, args.log_steps, listening))
    return _finish_run(args.out, settings, specs, scenarios, jobs, records)


COMMANDS = {
    "eval": cmd_eval,
    "forecast-eval": cmd_forecast_eval,
    "render-dump": cmd_render_dump,
    "bridge-serve": cmd_bridge_serve,
}


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        settings = load_settings(args.config)
    except ConfigError as e:
        configure_logging("INFO", args.json_logs)
        logger.error("invalid_config", error=str(e), path=e.path)
        return EXIT_INVALID_SPEC

    configure_logging(args.log_level or settings.log_level, args.json_logs)
    try:
        return COMMANDS[args.command](args, settings)
    except (ConfigError, RunSpecError, ScenarioError, TrackFileError, NoPathError) as e:
        logger.error("invalid_spec", command=args.command, error=str(e))
        return EXIT_INVALID_SPEC
    except OSError as e:
        logger.error("io_error", command=args.command, error=str(e))
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
