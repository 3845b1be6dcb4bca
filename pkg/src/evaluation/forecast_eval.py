"""
Forecast Quality Evaluation
===========================
ADE/FDE of CVM, Kalman and ground-truth forecasts over recorded tracks.

Track files are CSV with the columns ``object_id, step, cx, cy, w, h``.
Steps may have gaps (stride-sampled detections); velocities use the step gap.

A sample is one (track, anchor) pair where the anchor has at least two
history samples and the track has rows at every offset anchor + {s, ..., H*s}.
Ground truth for a sample is the track's own future rows, so it scores 0.
"""

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np
import structlog

from ..config import ForecastSettings
from ..forecasting import (
    Forecast,
    ForecastAlgorithm,
    ForecastEntry,
    ForecastSpace,
    KalmanParams,
    TrackBox,
    TrackHistory,
    TrackRow,
    ade,
    cvm_forecast,
    fde,
    forecast_offsets,
    kf_forecast,
    kf_init,
    kf_step,
)

logger = structlog.get_logger(__name__)

TRACK_COLUMNS = ("object_id", "step", "cx", "cy", "w", "h")
TABLE_COLUMNS = ("algorithm", "ade", "fde", "samples")


class TrackFileError(Exception):
    """Malformed track CSV."""

    def __init__(self, message: str, path: Optional[str] = None, line: Optional[int] = None):
        super().__init__(message)
        self.path = path
        self.line = line


# =============================================================================
# Track files
# =============================================================================

def write_tracks(rows: Iterable[TrackRow], path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(TRACK_COLUMNS)
        for row in rows:
            writer.writerow([row.object_id, row.step, repr(row.cx), repr(row.cy), repr(row.w), repr(row.h)])


def read_tracks(path: Path) -> list[TrackRow]:
    """
    Load a track CSV.

    Raises:
        TrackFileError: On a wrong header, unparsable values or repeated steps
        OSError: If the file cannot be read
    """
    rows: list[TrackRow] = []
    seen: set[tuple[str, int]] = set()
    with open(path, "r", newline="") as f:
        reader = csv.DictReader(f)
        if reader.fieldnames is None or tuple(reader.fieldnames) != TRACK_COLUMNS:
            raise TrackFileError(f"expected header {','.join(TRACK_COLUMNS)}, got {reader.fieldnames}", str(path), 1)
        for line, record in enumerate(reader, start=2):
            try:
                row = TrackRow(
                    object_id=record["object_id"],
                    step=int(record["step"]),
                    cx=float(record["cx"]),
                    cy=float(record["cy"]),
                    w=float(record["w"]),
                    h=float(record["h"]),
                )
            except (TypeError, ValueError) as e:
                raise TrackFileError(f"bad row: {e}", str(path), line) from e
            if not row.object_id:
                raise TrackFileError("empty object_id", str(path), line)
            if (row.object_id, row.step) in seen:
                raise TrackFileError(f"repeated step {row.step} for '{row.object_id}'", str(path), line)
            seen.add((row.object_id, row.step))
            rows.append(row)
    logger.info("tracks_loaded", path=str(path), rows=len(rows))
    return rows


# =============================================================================
# Scoring
# =============================================================================

@dataclass(frozen=True)
class ForecastScore:
    algorithm: ForecastAlgorithm
    ade: float
    fde: float
    samples: int


def _group(rows: Iterable[TrackRow]) -> dict[str, list[TrackRow]]:
    tracks: dict[str, list[TrackRow]] = {}
    for row in rows:
        tracks.setdefault(row.object_id, []).append(row)
    return {object_id: sorted(track, key=lambda r: r.step) for object_id, track in sorted(tracks.items())}


def _box(row: TrackRow) -> TrackBox:
    return TrackBox(row.cx, row.cy, row.w, row.h)


def _kalman(history: Sequence[TrackRow], params: KalmanParams, horizon: int, stride: int,
            space: ForecastSpace) -> Forecast:
    state = kf_init(_box(history[0]), params)
    for previous, row in zip(history, history[1:]):
        state = kf_step(state, _box(row), row.step - previous.step, params)
    return kf_forecast(state, horizon, stride, history[-1].object_id, space)


def evaluate_tracks(
    rows: Iterable[TrackRow],
    settings: ForecastSettings,
    horizon: Optional[int] = None,
    stride: Optional[int] = None,
    space: ForecastSpace = ForecastSpace.WORLD,
) -> list[ForecastScore]:
    """
    Mean ADE/FDE per algorithm over every complete (track, anchor) sample.

    Args:
        rows: Track rows in any order
        settings: History window, CVM window and Kalman noise
        horizon: H, defaults to the settings
        stride: s, defaults to the settings
        space: Space the rows live in

    Returns:
        One score per algorithm (CVM, KF, GT); NaN scores when no sample is complete
    """
    horizon = horizon or settings.horizon
    stride = stride or settings.stride
    offsets = forecast_offsets(horizon, stride)
    params = KalmanParams.from_settings(settings)

    errors: dict[ForecastAlgorithm, list[tuple[float, float]]] = {a: [] for a in ForecastAlgorithm}
    for object_id, track in _group(rows).items():
        by_step = {row.step: row for row in track}
        for anchor in range(1, len(track)):
            anchor_step = track[anchor].step
            future = [by_step.get(anchor_step + offset) for offset in offsets]
            actual = [_box(row) for row in future if row is not None]
            if len(actual) != len(offsets):
                continue

            window = track[max(0, anchor + 1 - settings.history_window):anchor + 1]
            history = TrackHistory(object_id, space, settings.history_window)
            for row in window:
                history.append(row.step, _box(row))

            truth = Forecast(
                object_id, ForecastAlgorithm.GT, space,
                tuple(ForecastEntry(offset, box) for offset, box in zip(offsets, actual)),
            )
            predictions = {
                ForecastAlgorithm.CVM: cvm_forecast(history, horizon, stride, settings.cvm_window),
                ForecastAlgorithm.KF: _kalman(window, params, horizon, stride, space),
                ForecastAlgorithm.GT: truth,
            }
            for algorithm, forecast in predictions.items():
                errors[algorithm].append((ade(forecast, actual), fde(forecast, actual)))

    scores = []
    for algorithm, values in errors.items():
        if values:
            arr = np.array(values)
            scores.append(ForecastScore(algorithm, float(arr[:, 0].mean()), float(arr[:, 1].mean()), len(values)))
        else:
            scores.append(ForecastScore(algorithm, float("nan"), float("nan"), 0))
    logger.info("forecast_eval_finished", samples=scores[0].samples, horizon=horizon, stride=stride)
    return scores


def write_score_table(scores: Sequence[ForecastScore], path: Path) -> None:
    """ADE/FDE table, one row per algorithm."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(TABLE_COLUMNS)
        for score in scores:
            writer.writerow([score.algorithm.value, f"{score.ade:.6f}", f"{score.fde:.6f}", score.samples])
    logger.info("report_written", path=str(path), kind="forecast_eval")
