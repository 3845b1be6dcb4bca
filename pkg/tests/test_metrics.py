"""Tests for episode records, SPL, outcome rates, seed aggregation and shortest paths."""

import math

import numpy as np
import pytest
from shapely.geometry import LineString, Point

from src.metrics import (
    CellKey,
    EmptyRecordSetError,
    EpisodeCause,
    EpisodeRecord,
    EvalReport,
    NoPathError,
    ShapeMismatchError,
    aggregate_seeds,
    format_band,
    mean_std,
    rates,
    reflex_vertices,
    shortest_path,
    spl,
)
from src.sim import SCHEMA_VERSION, PoseSpec, ScenarioConfig, scene_geometry

KEY = CellKey("s-turn", "0.6-1.2", "seg@pure-pursuit")


def _record(cause: EpisodeCause, shortest: float = 10.0, driven: float = 10.0) -> EpisodeRecord:
    return EpisodeRecord(cause=cause, shortest_path=shortest, path_length=driven, steps=10,
                         seed=1, scenario_id="s-turn")


def _blocked_square(block_top: float) -> ScenarioConfig:
    """20 x 20 road with a boundary block rising from the bottom edge between x = 8 and x = 12."""
    return ScenarioConfig(
        schema_version=SCHEMA_VERSION,
        scenario_id="blocked",
        roads=(((0.0, 0.0), (20.0, 0.0), (20.0, 20.0), (0.0, 20.0)),),
        boundaries=(((8.0, -1.0), (12.0, -1.0), (12.0, block_top), (8.0, block_top)),),
        start=PoseSpec(x=2.0, y=2.0),
        goal=(18.0, 2.0),
    )


class TestEpisodeRecord:

    def test_shortest_path_must_be_positive(self):
        with pytest.raises(ValueError):
            _record(EpisodeCause.SUCCESS, shortest=0.0)

    def test_path_consistency(self):
        record = _record(EpisodeCause.TIMEOUT, driven=5.0)
        assert record.is_consistent(speed=5.0, dt=0.1)
        assert not record.is_consistent(speed=6.0, dt=0.1)

    def test_to_dict_omits_unset_fields(self):
        data = _record(EpisodeCause.SUCCESS).to_dict()
        assert data["cause"] == "success"
        assert "ade" not in data and "step_log" not in data


class TestSpl:

    def test_single_perfect_episode(self):
        assert spl([_record(EpisodeCause.SUCCESS)]) == 1.0

    def test_detour_and_failure(self):
        records = [_record(EpisodeCause.SUCCESS, 10.0, 20.0), _record(EpisodeCause.COLLISION)]
        assert spl(records) == pytest.approx(0.25)

    def test_shortcut_is_capped(self):
        assert spl([_record(EpisodeCause.SUCCESS, 10.0, 8.0)]) == 1.0

    def test_protocol_errors_are_dropped(self):
        records = [_record(EpisodeCause.SUCCESS), _record(EpisodeCause.PROTOCOL_ERROR)]
        assert spl(records) == 1.0
        row = rates(records)
        assert row.n == 1
        assert row.protocol_errors == 1

    def test_never_exceeds_success_rate(self):
        rng = np.random.default_rng(3)
        causes = list(EpisodeCause)
        for _ in range(1000):
            records = [
                _record(causes[rng.integers(len(causes))], shortest=rng.uniform(1.0, 50.0),
                        driven=rng.uniform(0.0, 100.0))
                for _ in range(rng.integers(1, 8))
            ]
            if all(r.cause == EpisodeCause.PROTOCOL_ERROR for r in records):
                continue
            assert 0.0 <= spl(records) <= rates(records).success + 1e-12

    def test_no_eligible_records(self):
        with pytest.raises(EmptyRecordSetError):
            spl([_record(EpisodeCause.PROTOCOL_ERROR)])


class TestRates:

    def test_rates_sum_to_one(self):
        causes = [EpisodeCause.SUCCESS, EpisodeCause.COLLISION, EpisodeCause.OUT_OF_BOUND,
                  EpisodeCause.TIMEOUT, EpisodeCause.SUCCESS]
        row = rates([_record(c) for c in causes])
        assert row.success == pytest.approx(0.4)
        assert row.success + row.collision + row.oob + row.timeout == pytest.approx(1.0)

    def test_mean_std(self):
        mean, std = mean_std([0.7, 0.8, 0.9])
        assert mean == pytest.approx(0.8)
        assert std == pytest.approx(0.1)
        assert mean_std([0.5]) == (0.5, 0.0)


class TestReport:

    def test_band_label(self):
        assert format_band(0.6, 1.2) == "0.6-1.2"
        assert format_band(1.2, 1.5) == "1.2-1.5"

    def test_aggregate_across_seeds(self):
        seed_reports = [
            EvalReport.from_records([(KEY, [_record(EpisodeCause.SUCCESS)])]),
            EvalReport.from_records([(KEY, [_record(EpisodeCause.COLLISION)])]),
        ]
        merged = aggregate_seeds(seed_reports)
        stats = merged.cells[KEY]
        assert stats.mean["success"] == pytest.approx(0.5)
        assert stats.std["success"] == pytest.approx(math.sqrt(0.5))
        assert stats.n == 2 and stats.seeds == 2

    def test_mismatched_cells(self):
        other = CellKey("urban-grid", "0.6-1.2", "seg@pure-pursuit")
        reports = [
            EvalReport.from_records([(KEY, [_record(EpisodeCause.SUCCESS)])]),
            EvalReport.from_records([(other, [_record(EpisodeCause.SUCCESS)])]),
        ]
        with pytest.raises(ShapeMismatchError):
            aggregate_seeds(reports)

    def test_all_protocol_errors_give_nan(self):
        report = EvalReport.from_records([(KEY, [_record(EpisodeCause.PROTOCOL_ERROR)] * 2)])
        stats = report.cells[KEY]
        assert math.isnan(stats.mean["spl"])
        assert stats.n == 0
        assert report.protocol_errors == 2

    def test_rows_and_text(self):
        report = EvalReport.from_records([(KEY, [_record(EpisodeCause.SUCCESS)])])
        row = report.rows()[0]
        assert row["scenario_set"] == "s-turn" and row["spl"] == 1.0 and row["spl_std"] == 0.0
        assert "NAVIGATION EVALUATION REPORT" in report.get_report()


class TestShortestPath:

    def test_straight_line_when_visible(self, straight_road):
        assert shortest_path(straight_road).length == pytest.approx(50.0)

    def test_detour_around_boundary(self):
        path = shortest_path(_blocked_square(15.0))
        assert path.length == pytest.approx(2 * math.sqrt(6 ** 2 + 13 ** 2) + 4.0)
        assert path.waypoints[0] == (2.0, 2.0) and path.waypoints[-1] == (18.0, 2.0)

    def test_reflex_corners(self):
        corners = {tuple(c) for c in reflex_vertices(scene_geometry(_blocked_square(15.0)).drivable)}
        assert {(8.0, 15.0), (12.0, 15.0)} <= corners

    def test_unreachable_goal(self):
        with pytest.raises(NoPathError):
            shortest_path(_blocked_square(21.0))

    def test_never_shorter_than_straight_line(self, s_turn):
        length = shortest_path(s_turn).length
        assert length >= math.dist((s_turn.start.x, s_turn.start.y), s_turn.goal) - 1e-9

    def test_urban_grid_straight_route(self, urban_grid):
        config = urban_grid.for_route("seen-00")
        assert shortest_path(config).length == pytest.approx(90.0)

    def test_clearance_keeps_endpoints(self, urban_grid):
        config = urban_grid.for_route("seen-01")
        path = shortest_path(config, clearance=1.5)
        assert path.waypoints[0] == (config.start.x, config.start.y)
        assert path.waypoints[-1] == tuple(config.goal)
        assert path.length >= shortest_path(config).length - 1e-9

    def test_s_turn_route_keeps_clearance(self, s_turn):
        path = shortest_path(s_turn, clearance=3.0)
        boundary = scene_geometry(s_turn).drivable.boundary
        assert LineString(path.waypoints).distance(boundary) >= 3.0 - 1e-6

    @pytest.mark.parametrize("route_id", [f"seen-{k:02d}" for k in range(12)] + [f"unseen-{k:02d}" for k in range(4)])
    def test_urban_grid_routes_keep_clearance(self, urban_grid, route_id):
        config = urban_grid.for_route(route_id)
        path = shortest_path(config, clearance=3.0)
        assert path.waypoints[0] == (config.start.x, config.start.y)
        assert path.waypoints[-1] == tuple(config.goal)
        # Starts sit 2 m from the road ends, so the first leg may be a stub onto the cleared region
        rest = path.waypoints[1:]
        geom = LineString(rest) if len(rest) > 1 else Point(rest[0])
        assert geom.distance(scene_geometry(config).drivable.boundary) >= 3.0 - 1e-6

    def test_start_joins_cleared_region_by_stub(self, urban_grid):
        path = shortest_path(urban_grid.for_route("seen-00"), clearance=3.0)
        assert len(path.waypoints) == 3
        assert path.waypoints[1] == pytest.approx((-9.0, 0.0))
        assert path.length == pytest.approx(90.0)

    def test_infeasible_clearance_is_halved(self, straight_road):
        path = shortest_path(straight_road, clearance=6.0)
        assert path.waypoints == ((0.0, 0.0), (50.0, 0.0))
        assert LineString(path.waypoints).distance(scene_geometry(straight_road).drivable.boundary) >= 3.0 - 1e-6

    def test_infeasible_clearance_is_dropped(self, straight_road):
        assert shortest_path(straight_road, clearance=12.0).length == pytest.approx(50.0)
