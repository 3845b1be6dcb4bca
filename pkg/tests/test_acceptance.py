"""
Closed-loop direction checks on the s-turn preset with the shipped constants:
forecasts cut collisions, world-space overlays are no worse than image-space
ones, and perfect forecasts add little over constant velocity.

One seeded 50-episode run per cell at pedestrian speeds 0.6-1.2 m/s, shared
by every test in the module.
"""

import pytest

from src.config import Settings
from src.evaluation import RunSpec, build_report, plan_jobs, run_jobs
from src.sim import get_preset

pytestmark = pytest.mark.slow

CELLS = {
    "pursuit": {"policy": "pure-pursuit"},
    "avoid-cvm": {"forecaster": "cvm", "policy": "forecast-avoid"},
    "avoid-gt": {"forecaster": "gt", "policy": "forecast-avoid"},
    "pixel-none": {"policy": "pixel-avoid"},
    "pixel-3d": {"approach": "seg+ap", "forecaster": "cvm", "space": "world", "policy": "pixel-avoid"},
    "pixel-2d": {"approach": "seg+ap", "forecaster": "cvm", "space": "image", "policy": "pixel-avoid"},
}


@pytest.fixture(scope="module")
def suite():
    """(mean metrics, records) per cell name."""
    scenario = get_preset("s-turn")
    specs = [
        RunSpec.build(scenario="s-turn", speed_band=(0.6, 1.2), episodes=50, seeds=(1,), **fields)
        for fields in CELLS.values()
    ]
    scenarios = [scenario] * len(specs)
    jobs = plan_jobs(specs, scenarios)
    records = run_jobs(jobs, Settings(), threads=4)
    report = build_report(specs, scenarios, jobs, records)

    results = {}
    for index, (name, spec) in enumerate(zip(CELLS, specs)):
        cell = [r for job, r in zip(jobs, records) if job.spec_index == index]
        results[name] = (report.cells[spec.cell_key(scenario.scenario_id)].mean, cell)
    return results


def _metric(suite, cell: str, name: str) -> float:
    return suite[cell][0][name]


class TestForecastsHelp:

    def test_fewer_collisions(self, suite):
        assert _metric(suite, "avoid-cvm", "collision") <= _metric(suite, "pursuit", "collision") - 0.10

    def test_more_successes(self, suite):
        assert _metric(suite, "avoid-cvm", "success") >= _metric(suite, "pursuit", "success") + 0.10


class TestWorldSpaceOverlays:

    def test_world_space_not_worse_than_image_space(self, suite):
        assert _metric(suite, "pixel-3d", "success") >= _metric(suite, "pixel-2d", "success") - 0.02

    @pytest.mark.parametrize("cell", ["pixel-3d", "pixel-2d"])
    def test_overlays_beat_no_forecasts(self, suite, cell):
        assert _metric(suite, cell, "success") >= _metric(suite, "pixel-none", "success") + 0.05


class TestForecastQualityPlateau:

    def test_ground_truth_adds_little(self, suite):
        assert _metric(suite, "avoid-gt", "success") - _metric(suite, "avoid-cvm", "success") <= 0.05

    def test_ground_truth_scores_zero(self, suite):
        scored = [r for r in suite["avoid-gt"][1] if r.ade is not None]
        assert scored
        assert all(r.ade == pytest.approx(0.0, abs=1e-9) and r.fde == pytest.approx(0.0, abs=1e-9)
                   for r in scored)
