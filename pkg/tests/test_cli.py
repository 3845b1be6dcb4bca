"""End-to-end tests of the vfnav command line."""

import argparse
import csv
import json

import pytest

from src.cli import EXIT_INVALID_SPEC, EXIT_IO, EXIT_OK, main, parse_band

EVAL_ARGS = ["eval", "--scenario", "s-turn", "--speed-band", "0.6-1.2", "--approach", "seg", "seg+ap",
             "--episodes", "2", "--seeds", "1", "2"]


def _score_rows(path) -> dict[str, dict[str, str]]:
    with open(path, newline="") as f:
        return {row["algorithm"]: row for row in csv.DictReader(f)}


class TestArguments:

    def test_parse_band(self):
        assert parse_band("0.6-1.2") == (0.6, 1.2)

    @pytest.mark.parametrize("value", ["fast", "0.6", "a-b"])
    def test_bad_band(self, value):
        with pytest.raises(argparse.ArgumentTypeError):
            parse_band(value)


class TestExitCodes:

    def test_unknown_scenario(self, tmp_path):
        assert main(["eval", "--scenario", str(tmp_path / "nope.json"), "--out", str(tmp_path)]) == EXIT_INVALID_SPEC

    def test_malformed_scenario_file(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text('{"scenario_id": "broken"')
        assert main(["eval", "--scenario", str(path), "--out", str(tmp_path / "out")]) == EXIT_INVALID_SPEC

    def test_missing_config(self, tmp_path):
        code = main(["forecast-eval", "--config", str(tmp_path / "missing.yaml"), "--out", str(tmp_path)])
        assert code == EXIT_INVALID_SPEC

    def test_invalid_config(self, tmp_path):
        path = tmp_path / "settings.yaml"
        path.write_text("forecasting:\n  horizon: 0\n")
        assert main(["forecast-eval", "--config", str(path), "--out", str(tmp_path)]) == EXIT_INVALID_SPEC

    def test_overlay_without_forecaster(self, tmp_path):
        code = main(["eval", "--approach", "seg+ap", "--forecaster", "none", "--out", str(tmp_path)])
        assert code == EXIT_INVALID_SPEC

    def test_missing_track_file(self, tmp_path):
        code = main(["forecast-eval", "--tracks", str(tmp_path / "tracks.csv"), "--out", str(tmp_path)])
        assert code == EXIT_IO


class TestForecastEval:

    def test_noise_free_synthetic_tracks(self, tmp_path):
        assert main(["forecast-eval", "--synthetic", "5", "--noise", "0", "--out", str(tmp_path)]) == EXIT_OK
        rows = _score_rows(tmp_path / "forecast_eval.csv")
        assert list(rows) == ["cvm", "kf", "gt"]
        assert rows["cvm"]["ade"] == "0.000000" and rows["cvm"]["fde"] == "0.000000"
        assert rows["gt"]["ade"] == "0.000000"
        assert rows["gt"]["samples"] == "35"
        assert (tmp_path / "tracks.csv").exists()

    def test_recorded_tracks(self, tmp_path):
        main(["forecast-eval", "--synthetic", "3", "--out", str(tmp_path / "gen")])
        out = tmp_path / "scored"
        assert main(["forecast-eval", "--tracks", str(tmp_path / "gen" / "tracks.csv"), "--out", str(out)]) == EXIT_OK
        assert _score_rows(out / "forecast_eval.csv") == _score_rows(tmp_path / "gen" / "forecast_eval.csv")


class TestEval:

    def test_writes_reports(self, tmp_path):
        assert main(EVAL_ARGS + ["--out", str(tmp_path)]) == EXIT_OK
        for name in ("report.csv", "report.json", "manifest.json", "episodes.jsonl"):
            assert (tmp_path / name).exists()
        with open(tmp_path / "report.csv", newline="") as f:
            rows = list(csv.DictReader(f))
        assert [r["approach"] for r in rows] == ["seg@pure-pursuit", "seg+ap/cvm-3d@pure-pursuit"]
        assert all(r["n"] == "4" and r["seeds"] == "2" for r in rows)
        assert json.loads((tmp_path / "report.json").read_text())["cell_count"] == 2

    def test_reruns_are_byte_identical(self, tmp_path):
        main(EVAL_ARGS + ["--out", str(tmp_path / "a")])
        main(EVAL_ARGS + ["--out", str(tmp_path / "b"), "--threads", "2"])
        for name in ("report.csv", "report.json", "episodes.jsonl"):
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()

    def test_manifest_rerun(self, tmp_path):
        main(EVAL_ARGS + ["--out", str(tmp_path / "a")])
        code = main(["eval", "--manifest", str(tmp_path / "a" / "manifest.json"), "--out", str(tmp_path / "b")])
        assert code == EXIT_OK
        assert (tmp_path / "a" / "report.csv").read_bytes() == (tmp_path / "b" / "report.csv").read_bytes()


class TestRenderDump:

    def test_dumps_frames(self, tmp_path):
        code = main(["render-dump", "--scenario", "s-turn", "--approach", "seg+ap", "--steps", "3",
                     "--out", str(tmp_path)])
        assert code == EXIT_OK
        frames = json.loads((tmp_path / "frames.json").read_text())["frames"]
        assert [f["step"] for f in frames] == [0, 1, 2, 3]
        assert all((tmp_path / f["file"]).exists() for f in frames)
