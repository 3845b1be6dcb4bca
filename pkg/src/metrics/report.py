"""
Evaluation Report
=================
Per-cell metric tables. A cell is one (scenario set, speed band, approach)
combination; each cell holds the mean and sample standard deviation of every
metric across seeds.
"""

from dataclasses import dataclass
from typing import Any, Iterable, Mapping, NamedTuple, Optional, Sequence

from .errors import EmptyRecordSetError, ShapeMismatchError
from .navigation import METRIC_FIELDS, RateRow, mean_std, rates
from .records import EpisodeRecord


class CellKey(NamedTuple):
    scenario_set: str
    speed_band: str
    approach: str


def format_band(low: float, high: float) -> str:
    return f"{low:g}-{high:g}"


@dataclass(frozen=True)
class CellStats:
    """Seed-aggregated metrics of one cell."""
    mean: Mapping[str, float]
    std: Mapping[str, float]
    n: int
    seeds: int
    protocol_errors: int = 0

    @classmethod
    def from_row(cls, row: RateRow) -> "CellStats":
        return cls(
            mean={name: row.metric(name) for name in METRIC_FIELDS},
            std={name: 0.0 for name in METRIC_FIELDS},
            n=row.n,
            seeds=1,
            protocol_errors=row.protocol_errors,
        )


class EvalReport:
    """Metric table keyed by CellKey, in insertion order."""

    def __init__(self, cells: Optional[Mapping[CellKey, CellStats]] = None):
        self.cells: dict[CellKey, CellStats] = dict(cells or {})

    @classmethod
    def from_records(cls, grouped: Iterable[tuple[CellKey, Sequence[EpisodeRecord]]]) -> "EvalReport":
        """Single-seed report from records grouped per cell."""
        report = cls()
        for key, records in grouped:
            try:
                report.cells[key] = CellStats.from_row(rates(records))
            except EmptyRecordSetError:
                # Every episode of the cell hit a protocol error
                report.cells[key] = CellStats(
                    mean={name: float("nan") for name in METRIC_FIELDS},
                    std={name: float("nan") for name in METRIC_FIELDS},
                    n=0,
                    seeds=1,
                    protocol_errors=len(records),
                )
        return report

    @property
    def protocol_errors(self) -> int:
        return sum(c.protocol_errors for c in self.cells.values())

    def rows(self) -> list[dict[str, Any]]:
        """Flat rows for CSV output."""
        rows = []
        for key, stats in self.cells.items():
            row: dict[str, Any] = key._asdict()
            for name in METRIC_FIELDS:
                row[name] = stats.mean[name]
                row[f"{name}_std"] = stats.std[name]
            row["n"] = stats.n
            row["seeds"] = stats.seeds
            row["protocol_errors"] = stats.protocol_errors
            rows.append(row)
        return rows

    def to_dict(self) -> dict[str, Any]:
        return {
            "cells": self.rows(),
            "cell_count": len(self.cells),
            "protocol_errors": self.protocol_errors,
        }

    def get_report(self) -> str:
        """Fixed-width text table."""
        lines = [
            "=" * 96,
            "NAVIGATION EVALUATION REPORT",
            "=" * 96,
            f"{'scenario set':<22}{'band':<10}{'approach':<14}"
            f"{'SPL':>12}{'success':>10}{'collision':>10}{'oob':>8}{'timeout':>8}{'n':>6}",
            "-" * 96,
        ]
        for key, stats in self.cells.items():
            m, s = stats.mean, stats.std
            lines.append(
                f"{key.scenario_set:<22}{key.speed_band:<10}{key.approach:<14}"
                f"{m['spl']:>7.3f}±{s['spl']:<4.2f}{m['success']:>10.3f}{m['collision']:>10.3f}"
                f"{m['oob']:>8.3f}{m['timeout']:>8.3f}{stats.n:>6}"
            )
        lines.append("-" * 96)
        lines.append(f"Cells: {len(self.cells)}, protocol errors: {self.protocol_errors}")
        lines.append("=" * 96)
        return "\n".join(lines)


def aggregate_seeds(reports: Sequence[EvalReport]) -> EvalReport:
    """
    Combine per-seed reports cell by cell.

    Each metric becomes the unweighted mean over seeds with the sample
    standard deviation (0 for a single seed).

    Raises:
        EmptyRecordSetError: If no report is given
        ShapeMismatchError: If the reports cover different cells
    """
    if not reports:
        raise EmptyRecordSetError("no reports to aggregate")
    keys = list(reports[0].cells)
    for report in reports[1:]:
        if list(report.cells) != keys:
            raise ShapeMismatchError(
                f"report cells differ: {sorted(report.cells)} vs {sorted(keys)}"
            )

    merged = EvalReport()
    for key in keys:
        per_seed = [r.cells[key] for r in reports]
        mean, std = {}, {}
        for name in METRIC_FIELDS:
            mean[name], std[name] = mean_std([c.mean[name] for c in per_seed])
        merged.cells[key] = CellStats(
            mean=mean,
            std=std,
            n=sum(c.n for c in per_seed),
            seeds=len(per_seed),
            protocol_errors=sum(c.protocol_errors for c in per_seed),
        )
    return merged
