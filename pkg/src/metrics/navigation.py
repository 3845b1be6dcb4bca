"""
Navigation Metrics
==================
SPL and outcome rates over a set of episodes, and their aggregation across
seeds.

SPL = (1/N) * sum_i 1{success_i} * l_i / max(l_i, p_i)

Protocol-error episodes are dropped before any metric is computed.
"""

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import EmptyRecordSetError
from .records import EpisodeCause, EpisodeRecord

METRIC_FIELDS = ("spl", "success", "collision", "oob", "timeout")


def _eligible(records: Sequence[EpisodeRecord]) -> list[EpisodeRecord]:
    eligible = [r for r in records if r.counts_for_metrics]
    if not eligible:
        raise EmptyRecordSetError("no metric-eligible episodes")
    return eligible


def spl(records: Sequence[EpisodeRecord]) -> float:
    """
    Success weighted by path length.

    Raises:
        EmptyRecordSetError: If no record counts for metrics
    """
    eligible = _eligible(records)
    total = sum(
        r.shortest_path / max(r.shortest_path, r.path_length) for r in eligible if r.success
    )
    return total / len(eligible)


@dataclass(frozen=True)
class RateRow:
    """Outcome rates of one record set; the four rates sum to 1."""
    spl: float
    success: float
    collision: float
    oob: float
    timeout: float
    n: int
    protocol_errors: int = 0

    def metric(self, name: str) -> float:
        return float(getattr(self, name))


def rates(records: Sequence[EpisodeRecord]) -> RateRow:
    """
    Share of each termination cause plus SPL.

    Raises:
        EmptyRecordSetError: If no record counts for metrics
    """
    eligible = _eligible(records)
    n = len(eligible)
    counts = {cause: 0 for cause in EpisodeCause}
    for record in eligible:
        counts[record.cause] += 1
    return RateRow(
        spl=spl(eligible),
        success=counts[EpisodeCause.SUCCESS] / n,
        collision=counts[EpisodeCause.COLLISION] / n,
        oob=counts[EpisodeCause.OUT_OF_BOUND] / n,
        timeout=counts[EpisodeCause.TIMEOUT] / n,
        n=n,
        protocol_errors=len(records) - n,
    )


def mean_std(values: Sequence[float]) -> tuple[float, float]:
    """Unweighted mean and sample standard deviation (0 for a single value)."""
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        raise EmptyRecordSetError("no values to aggregate")
    std = float(np.std(arr, ddof=1)) if arr.size > 1 else 0.0
    return float(np.mean(arr)), std
