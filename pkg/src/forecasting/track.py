"""
Tracks and Forecasts
====================
Value types shared by every forecaster.

All boxes are kept in center form ``(cx, cy, w, h)``:

- world space: (x, y) ground position, w = 2 * radius, h = height (meters)
- image space: box center in pixels, w/h in pixels
"""

from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Optional

import numpy as np

from ..geometry import BBox2D, Cylinder3D
from .errors import ForecastError


class ForecastAlgorithm(str, Enum):
    """Forecast producers."""
    CVM = "cvm"
    KF = "kf"
    GT = "gt"


class ForecastSpace(str, Enum):
    """Where a track lives: ground plane (3D) or image plane (2D)."""
    WORLD = "world"
    IMAGE = "image"


@dataclass(frozen=True)
class TrackBox:
    """Center-form box."""
    cx: float
    cy: float
    w: float
    h: float

    @classmethod
    def from_array(cls, values: np.ndarray) -> "TrackBox":
        return cls(float(values[0]), float(values[1]), float(values[2]), float(values[3]))

    @classmethod
    def from_bbox(cls, box: BBox2D) -> "TrackBox":
        cx, cy = box.center
        return cls(cx, cy, box.w, box.h)

    @classmethod
    def from_cylinder(cls, cylinder: Cylinder3D) -> "TrackBox":
        return cls(cylinder.center[0], cylinder.center[1], 2.0 * cylinder.radius, cylinder.height)

    def as_array(self) -> np.ndarray:
        return np.array([self.cx, self.cy, self.w, self.h], dtype=float)

    @property
    def center(self) -> tuple[float, float]:
        return (self.cx, self.cy)

    def to_bbox(self) -> BBox2D:
        w, h = max(self.w, 0.0), max(self.h, 0.0)
        return BBox2D(self.cx - w / 2.0, self.cy - h / 2.0, w, h)

    def to_cylinder(self) -> Optional[Cylinder3D]:
        """World-space volume, or None once the size has collapsed."""
        if self.w <= 0.0 or self.h <= 0.0:
            return None
        return Cylinder3D(center=(self.cx, self.cy), radius=self.w / 2.0, height=self.h)

    def floored(self) -> "TrackBox":
        """Copy with negative sizes clamped to zero."""
        if self.w >= 0.0 and self.h >= 0.0:
            return self
        return TrackBox(self.cx, self.cy, max(self.w, 0.0), max(self.h, 0.0))


@dataclass(frozen=True)
class ForecastEntry:
    offset: int
    box: TrackBox


@dataclass(frozen=True)
class Forecast:
    """Predicted boxes at future step offsets, tagged with producer and space."""
    object_id: str
    algorithm: ForecastAlgorithm
    space: ForecastSpace
    entries: tuple[ForecastEntry, ...]

    def __post_init__(self) -> None:
        offsets = [e.offset for e in self.entries]
        if any(b <= a for a, b in zip(offsets, offsets[1:])):
            raise ForecastError(f"forecast offsets must be strictly increasing, got {offsets}", self.object_id)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[ForecastEntry]:
        return iter(self.entries)

    @property
    def offsets(self) -> list[int]:
        return [e.offset for e in self.entries]

    @property
    def boxes(self) -> list[TrackBox]:
        return [e.box for e in self.entries]

    @property
    def centers(self) -> np.ndarray:
        """(H, 2) predicted centers."""
        return np.array([e.box.center for e in self.entries], dtype=float).reshape(-1, 2)

    @property
    def final(self) -> TrackBox:
        return self.entries[-1].box


def forecast_offsets(horizon: int, stride: int) -> list[int]:
    """Offsets {s, 2s, ..., H*s}."""
    if horizon < 1 or stride < 1:
        raise ValueError(f"horizon and stride must be >= 1, got {horizon}, {stride}")
    return [stride * (i + 1) for i in range(horizon)]


class TrackHistory:
    """
    Bounded history of observed boxes for one object.

    Step indices must strictly increase; the oldest samples fall off once
    ``capacity`` is reached.
    """

    def __init__(self, object_id: str, space: ForecastSpace, capacity: int = 8):
        if capacity < 2:
            raise ValueError(f"history capacity must be >= 2, got {capacity}")
        self.object_id = object_id
        self.space = space
        self.capacity = capacity
        self._samples: deque[tuple[int, TrackBox]] = deque(maxlen=capacity)

    def append(self, step: int, box: TrackBox) -> None:
        if self._samples and step <= self._samples[-1][0]:
            raise ForecastError(
                f"step {step} does not follow last step {self._samples[-1][0]}", self.object_id
            )
        self._samples.append((step, box))

    def __len__(self) -> int:
        return len(self._samples)

    @property
    def samples(self) -> list[tuple[int, TrackBox]]:
        return list(self._samples)

    @property
    def last(self) -> tuple[int, TrackBox]:
        if not self._samples:
            raise ForecastError("empty track history", self.object_id)
        return self._samples[-1]

    def steps(self) -> np.ndarray:
        return np.array([s for s, _ in self._samples], dtype=float)

    def values(self) -> np.ndarray:
        """(N, 4) boxes in history order."""
        return np.array([b.as_array() for _, b in self._samples], dtype=float).reshape(-1, 4)
