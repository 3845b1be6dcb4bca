"""Tests for run specs, job planning, the episode environment and batch runs."""

import pytest

from src.evaluation import (
    NavigationEnv,
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
    run_episode,
    run_jobs,
    write_tracks,
)
from src.forecasting import ForecastAlgorithm, ForecastSpace, generate_tracks
from src.metrics import EpisodeCause
from src.policy import PurePursuitPolicy, StraightPolicy
from src.render import APPROACHES
from src.sim import PedestrianSpec, RouteSplit


@pytest.fixture
def passing_pedestrian(straight_road):
    """Straight road with a pedestrian walking beside the agent's line."""
    walker = PedestrianSpec(ped_id="w0", waypoints=((10.0, 3.0), (40.0, 3.0)), speed_range=(1.0, 1.0))
    return straight_road.model_copy(update={"pedestrians": (walker,)})


class TestRunSpec:

    @pytest.mark.parametrize("fields", [
        {"approach": "hologram"},
        {"approach": "seg+ap"},
        {"policy": "teleport"},
        {"policy": "bridge:  "},
        {"speed_band": (1.2, 0.6)},
        {"seeds": (1, 1)},
        {"episodes": 0},
        {"colour": "red"},
    ])
    def test_invalid_fields(self, fields):
        with pytest.raises(RunSpecError):
            RunSpec.build(scenario="s-turn", **fields)

    def test_approach_label(self):
        spec = RunSpec.build(scenario="s-turn", approach="seg+ap", forecaster="cvm", space="image")
        assert spec.approach_label == "seg+ap/cvm-2d@pure-pursuit"
        assert spec.mode == APPROACHES["seg+ap"]

    def test_bridge_policy(self):
        spec = RunSpec.build(scenario="s-turn", policy="bridge: python -m agent")
        assert spec.is_bridge and spec.needs_observation
        assert spec.bridge_command == "python -m agent"
        assert spec.approach_label == "seg@bridge"

    def test_cell_key_names_split(self):
        spec = RunSpec.build(scenario="urban-grid", route_split="unseen", speed_band=(1.2, 1.5))
        key = spec.cell_key("urban-grid")
        assert key.scenario_set == "urban-grid/unseen"
        assert key.speed_band == "1.2-1.5"

    def test_resolve_unknown_scenario(self, tmp_path):
        with pytest.raises(RunSpecError):
            resolve_scenario(str(tmp_path / "missing.json"))


class TestPlanning:

    def test_episode_seeds(self):
        assert episode_seed(1, 0) == episode_seed(1, 0)
        assert len({episode_seed(1, i) for i in range(20)}) == 20
        assert episode_seed(1, 0) != episode_seed(2, 0)
        assert 0 <= episode_seed(3, 7) < 2 ** 32

    def test_job_order(self, s_turn):
        spec = RunSpec.build(scenario="s-turn", episodes=2, seeds=(5, 6))
        jobs = plan_jobs([spec], [s_turn])
        assert [(j.run_seed, j.episode) for j in jobs] == [(5, 0), (5, 1), (6, 0), (6, 1)]
        assert all(j.seed == episode_seed(j.run_seed, j.episode) for j in jobs)

    def test_routes_cycle_within_split(self, urban_grid):
        spec = RunSpec.build(scenario="urban-grid", route_split="unseen", episodes=6, seeds=(1,))
        jobs = plan_jobs([spec], [urban_grid])
        unseen = urban_grid.route_ids(RouteSplit.UNSEEN)
        assert [j.route_id for j in jobs] == unseen + unseen[:2]
        assert jobs[0].config == urban_grid.with_speed_range(0.6, 1.2).for_route(unseen[0])

    def test_speed_band_applied(self, s_turn):
        spec = RunSpec.build(scenario="s-turn", speed_band=(1.2, 1.5), episodes=1, seeds=(1,))
        config = plan_jobs([spec], [s_turn])[0].config
        assert all(p.speed_range == (1.2, 1.5) for p in config.pedestrians)

    def test_split_without_routes(self, s_turn):
        spec = RunSpec.build(scenario="s-turn", route_split="seen")
        with pytest.raises(RunSpecError):
            plan_jobs([spec], [s_turn])

    def test_duplicate_cells(self, s_turn):
        spec = RunSpec.build(scenario="s-turn")
        with pytest.raises(RunSpecError):
            plan_jobs([spec, spec], [s_turn, s_turn])


class TestNavigationEnv:

    def test_overlay_needs_forecaster(self, straight_road):
        with pytest.raises(ValueError):
            NavigationEnv(straight_road, 1, mode=APPROACHES["seg+ap"])

    def test_step_before_reset(self, straight_road):
        env = NavigationEnv(straight_road, 1)
        with pytest.raises(RuntimeError):
            env.world

    def test_record_while_running(self, straight_road):
        env = NavigationEnv(straight_road, 1)
        env.reset()
        with pytest.raises(RuntimeError):
            env.record()

    def test_straight_episode(self, straight_road, settings):
        record = run_episode(NavigationEnv(straight_road, 1, settings=settings), PurePursuitPolicy())
        assert record.cause == EpisodeCause.SUCCESS
        assert record.shortest_path == pytest.approx(50.0)
        assert record.path_length == pytest.approx(record.steps * straight_road.speed * straight_road.dt)
        assert record.ade is None

    def test_ground_truth_scores_zero_online(self, passing_pedestrian, settings):
        env = NavigationEnv(passing_pedestrian, 1, settings=settings, forecaster=ForecastAlgorithm.GT)
        record = run_episode(env, StraightPolicy())
        assert record.cause == EpisodeCause.SUCCESS
        assert record.ade == pytest.approx(0.0, abs=1e-9)
        assert record.fde == pytest.approx(0.0, abs=1e-9)

    def test_image_space_is_not_scored(self, passing_pedestrian, settings):
        env = NavigationEnv(passing_pedestrian, 1, settings=settings, forecaster=ForecastAlgorithm.CVM,
                            space=ForecastSpace.IMAGE)
        assert run_episode(env, StraightPolicy()).ade is None

    def test_observations_only_when_needed(self, straight_road, settings):
        env = NavigationEnv(straight_road, 1, settings=settings)
        assert env.reset().observation is None
        env = NavigationEnv(straight_road, 1, settings=settings, needs_observation=True)
        assert env.reset().observation is not None

    def test_step_log(self, straight_road, settings):
        env = NavigationEnv(straight_road, 1, settings=settings, log_steps=True)
        record = run_episode(env, StraightPolicy())
        assert len(record.step_log) == record.steps
        assert record.step_log[0].step == 1


class TestRouteFollowing:

    def _run(self, config, settings):
        empty = config.model_copy(update={"pedestrians": ()})
        env = NavigationEnv(empty, 1, settings=settings)
        return run_episode(env, PurePursuitPolicy.from_settings(settings.policy))

    def test_s_turn_without_pedestrians(self, s_turn, settings):
        record = self._run(s_turn, settings)
        assert record.cause == EpisodeCause.SUCCESS
        assert record.path_length < 1.1 * record.shortest_path

    @pytest.mark.parametrize("route_id", [f"seen-{k:02d}" for k in range(12)] + [f"unseen-{k:02d}" for k in range(4)])
    def test_urban_grid_routes(self, urban_grid, settings, route_id):
        record = self._run(urban_grid.for_route(route_id), settings)
        assert record.cause == EpisodeCause.SUCCESS


class TestBatchRun:

    def _specs(self):
        return [
            RunSpec.build(scenario="s-turn", approach="seg+ap", forecaster="cvm",
                          policy="forecast-avoid", episodes=2, seeds=(1, 2)),
            RunSpec.build(scenario="s-turn", policy="straight", episodes=2, seeds=(1, 2)),
        ]

    def test_thread_count_does_not_change_results(self, s_turn, settings):
        specs = self._specs()
        jobs = plan_jobs(specs, [s_turn, s_turn])
        assert run_jobs(jobs, settings, threads=1) == run_jobs(jobs, settings, threads=2)

    def test_report_has_one_cell_per_spec(self, s_turn, settings):
        specs = self._specs()
        scenarios = [s_turn, s_turn]
        jobs = plan_jobs(specs, scenarios)
        report = build_report(specs, scenarios, jobs, run_jobs(jobs, settings))
        assert list(report.cells) == [spec.cell_key("s-turn") for spec in specs]
        for stats in report.cells.values():
            assert stats.seeds == 2 and stats.n == 4
            assert 0.0 <= stats.mean["spl"] <= stats.mean["success"] <= 1.0


class TestForecastEval:

    def test_noise_free_tracks(self, settings):
        rows = generate_tracks(count=4, noise_sigma=0.0)
        cvm, kf, gt = evaluate_tracks(rows, settings.forecasting)
        assert (cvm.algorithm, kf.algorithm, gt.algorithm) == (
            ForecastAlgorithm.CVM, ForecastAlgorithm.KF, ForecastAlgorithm.GT)
        assert cvm.samples == kf.samples == gt.samples == 4 * 7
        assert cvm.ade == pytest.approx(0.0, abs=1e-9)
        assert gt.ade == 0.0 and gt.fde == 0.0

    def test_noisy_tracks_have_error(self, settings):
        cvm, _, gt = evaluate_tracks(generate_tracks(count=10, seed=2), settings.forecasting)
        assert cvm.ade > 0.0
        assert gt.ade == 0.0

    def test_kalman_and_constant_velocity_agree(self, settings):
        cvm, kf, _ = evaluate_tracks(generate_tracks(count=100, noise_sigma=0.05, seed=9), settings.forecasting)
        assert cvm.samples == kf.samples > 0
        assert 0.5 <= kf.ade / cvm.ade <= 2.0

    def test_short_tracks_give_nan(self, settings):
        rows = generate_tracks(count=1, history=2, future=1)
        scores = evaluate_tracks(rows, settings.forecasting)
        assert all(s.samples == 0 for s in scores)

    def test_file_round_trip(self, tmp_path):
        rows = generate_tracks(count=2)
        path = tmp_path / "tracks.csv"
        write_tracks(rows, path)
        assert read_tracks(path) == rows

    def test_wrong_header(self, tmp_path):
        path = tmp_path / "tracks.csv"
        path.write_text("id,step,x,y,w,h\n")
        with pytest.raises(TrackFileError):
            read_tracks(path)

    def test_repeated_step(self, tmp_path):
        path = tmp_path / "tracks.csv"
        path.write_text("object_id,step,cx,cy,w,h\na,0,0,0,1,1\na,0,1,1,1,1\n")
        with pytest.raises(TrackFileError) as info:
            read_tracks(path)
        assert info.value.line == 3

    def test_bad_value(self, tmp_path):
        path = tmp_path / "tracks.csv"
        path.write_text("object_id,step,cx,cy,w,h\na,zero,0,0,1,1\n")
        with pytest.raises(TrackFileError):
            read_tracks(path)


class TestRenderDump:

    def test_writes_frames_and_manifest(self, straight_road, standing_pedestrian, settings, tmp_path):
        config = straight_road.model_copy(update={"pedestrians": (standing_pedestrian,)})
        spec = RunSpec.build(scenario="straight", approach="seg+ap", forecaster="cvm", policy="straight")
        manifest = render_dump(spec, config, seed=1, steps=5, out_dir=tmp_path, settings=settings)
        assert [f.step for f in manifest.frames] == list(range(6))
        assert (tmp_path / "frame_00005.png").exists()
        assert (tmp_path / "frames.json").exists()
        assert manifest.approach == "seg+ap/cvm-3d@straight"
