"""
Report writers: ``report.csv`` (one row per cell) and ``report.json`` (cells,
records summary and the embedded run manifest).

NaN metrics (cells where every episode hit a protocol error) are written as
empty CSV fields and JSON nulls.
"""

import csv
import json
import math
from pathlib import Path
from typing import Any, Optional

import structlog

from ..metrics import METRIC_FIELDS, EvalReport
from .manifest import RunManifest

logger = structlog.get_logger(__name__)

CSV_COLUMNS = (
    ("scenario_set", "speed_band", "approach")
    + METRIC_FIELDS
    + tuple(f"{name}_std" for name in METRIC_FIELDS)
    + ("n", "seeds", "protocol_errors")
)


def _clean(value: Any) -> Any:
    if isinstance(value, float) and math.isnan(value):
        return None
    if isinstance(value, dict):
        return {k: _clean(v) for k, v in value.items()}
    if isinstance(value, list):
        return [_clean(v) for v in value]
    return value


def _csv_value(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.6f}"
    return str(value)


def write_report_csv(report: EvalReport, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in report.rows():
            writer.writerow([_csv_value(_clean(row[column])) for column in CSV_COLUMNS])
    logger.info("report_written", path=str(path), kind="csv", cells=len(report.cells))
    return path


def write_report_json(report: EvalReport, path: Path, manifest: Optional[RunManifest] = None) -> Path:
    payload = _clean(report.to_dict())
    if manifest is not None:
        payload["manifest"] = manifest.to_dict()
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as f:
        f.write(json.dumps(payload, indent=2, sort_keys=True, allow_nan=False))
        f.write("\n")
    logger.info("report_written", path=str(path), kind="json", cells=len(report.cells))
    return path


def write_reports(report: EvalReport, out_dir: Path, manifest: Optional[RunManifest] = None) -> list[Path]:
    """Write report.csv, report.json and (with a manifest) manifest.json."""
    paths = [
        write_report_csv(report, out_dir / "report.csv"),
        write_report_json(report, out_dir / "report.json", manifest),
    ]
    if manifest is not None:
        paths.append(manifest.write(out_dir / "manifest.json"))
    return paths
