"""Tests for the episode log, run manifests and report files."""

import csv
import json

import pytest

from src.config import ConfigError
from src.evaluation import RunSpec
from src.metrics import CellKey, EpisodeCause, EpisodeRecord, EvalReport
from src.reporting import CSV_COLUMNS, EpisodeLog, RunManifest, load_manifest, verify_integrity, write_reports

KEY = CellKey("s-turn", "0.6-1.2", "seg@pure-pursuit")


def _record(cause: EpisodeCause = EpisodeCause.SUCCESS, seed: int = 1) -> EpisodeRecord:
    return EpisodeRecord(cause=cause, shortest_path=40.0, path_length=48.0, steps=80, seed=seed,
                         scenario_id="s-turn")


class TestEpisodeLog:

    def _log(self, tmp_path, records: int = 3):
        path = tmp_path / "episodes.jsonl"
        log = EpisodeLog(path, run_hash="abc")
        for seed in range(records):
            log.append(_record(seed=seed), cell={"scenario_set": "s-turn"})
        return path, log

    def test_chain_verifies(self, tmp_path):
        path, log = self._log(tmp_path)
        result = verify_integrity(path)
        assert result["valid"]
        assert result["records_checked"] == 3 == log.count

    def test_identical_runs_write_identical_logs(self, tmp_path):
        first, _ = self._log(tmp_path / "a")
        second, _ = self._log(tmp_path / "b")
        assert first.read_bytes() == second.read_bytes()

    def test_edited_record_breaks_next_link(self, tmp_path):
        path, _ = self._log(tmp_path)
        lines = path.read_text().splitlines()
        lines[1] = lines[1].replace('"seed":0', '"seed":7')
        path.write_text("\n".join(lines) + "\n")
        result = verify_integrity(path)
        assert not result["valid"]
        assert result["chain_failures"] == [2]

    def test_missing_file(self, tmp_path):
        assert not verify_integrity(tmp_path / "none.jsonl")["valid"]

    def test_missing_header(self, tmp_path):
        path = tmp_path / "episodes.jsonl"
        path.write_text('{"record": {}}\n')
        assert verify_integrity(path)["error"] == "Missing header"


class TestManifest:

    def _manifest(self, settings, s_turn) -> RunManifest:
        spec = RunSpec.build(scenario="s-turn", approach="seg+ap", forecaster="kf", episodes=4, seeds=(1, 2))
        return RunManifest.build(settings, [spec], [s_turn])

    def test_round_trip(self, settings, s_turn, tmp_path):
        manifest = self._manifest(settings, s_turn)
        loaded = load_manifest(manifest.write(tmp_path / "manifest.json"))
        assert loaded.config_hash == manifest.config_hash
        assert loaded.run_specs() == manifest.run_specs()
        assert loaded.scenario_configs() == [s_turn]
        assert loaded.resolved_settings().digest() == settings.digest()

    def test_hash_ignores_versions(self, settings, s_turn):
        manifest = self._manifest(settings, s_turn)
        other = RunManifest(manifest.settings, manifest.specs, manifest.scenarios, versions={})
        assert other.config_hash == manifest.config_hash

    def test_tampered_manifest(self, settings, s_turn, tmp_path):
        path = self._manifest(settings, s_turn).write(tmp_path / "manifest.json")
        data = json.loads(path.read_text())
        data["specs"][0]["episodes"] = 5
        path.write_text(json.dumps(data))
        with pytest.raises(ConfigError):
            load_manifest(path)

    def test_not_a_manifest(self, tmp_path):
        path = tmp_path / "manifest.json"
        path.write_text('{"hello": 1}')
        with pytest.raises(ConfigError):
            load_manifest(path)

    def test_loads_from_report_json(self, settings, s_turn, tmp_path):
        manifest = self._manifest(settings, s_turn)
        report = EvalReport.from_records([(KEY, [_record()])])
        write_reports(report, tmp_path, manifest)
        assert load_manifest(tmp_path / "report.json").config_hash == manifest.config_hash


class TestWriters:

    def test_writes_all_files(self, settings, s_turn, tmp_path):
        manifest = RunManifest.build(settings, [RunSpec.build(scenario="s-turn")], [s_turn])
        report = EvalReport.from_records([(KEY, [_record(), _record(EpisodeCause.COLLISION)])])
        paths = write_reports(report, tmp_path, manifest)
        assert [p.name for p in paths] == ["report.csv", "report.json", "manifest.json"]

        with open(tmp_path / "report.csv", newline="") as f:
            rows = list(csv.DictReader(f))
        assert tuple(rows[0]) == CSV_COLUMNS
        assert rows[0]["success"] == "0.500000"
        assert rows[0]["spl"] == "0.416667"
        assert rows[0]["n"] == "2"

    def test_nan_cells(self, tmp_path):
        report = EvalReport.from_records([(KEY, [_record(EpisodeCause.PROTOCOL_ERROR)])])
        write_reports(report, tmp_path)
        with open(tmp_path / "report.csv", newline="") as f:
            row = next(csv.DictReader(f))
        assert row["spl"] == ""
        assert row["protocol_errors"] == "1"
        data = json.loads((tmp_path / "report.json").read_text())
        assert data["cells"][0]["spl"] is None
        assert not (tmp_path / "manifest.json").exists()
