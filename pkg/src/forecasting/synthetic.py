"""
Synthetic pedestrian tracks for forecast evaluation.

Each track is a straight constant-velocity walk sampled every ``stride``
frames, with Gaussian noise on the ground position.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class TrackRow:
    """One observation row: object_id, step, cx, cy, w, h."""
    object_id: str
    step: int
    cx: float
    cy: float
    w: float
    h: float


def generate_tracks(
    count: int = 100,
    seed: int = 0,
    stride: int = 4,
    history: int = 8,
    future: int = 5,
    noise_sigma: float = 0.05,
    dt: float = 0.05,
    speed_range: tuple[float, float] = (0.6, 1.2),
) -> list[TrackRow]:
    """
    Generate ``count`` noisy constant-velocity tracks.

    Args:
        count: Number of tracks
        seed: Generator seed
        stride: Frames between samples
        history: Samples before the forecast anchor (anchor included)
        future: Samples after the anchor
        noise_sigma: Position noise standard deviation in meters
        dt: Frame length in seconds
        speed_range: Walking speed range in m/s

    Returns:
        Rows ordered by track, then step
    """
    rng = np.random.default_rng(seed)
    samples = history + future
    rows: list[TrackRow] = []
    for i in range(count):
        start = rng.uniform(-20.0, 20.0, size=2)
        speed = rng.uniform(*speed_range)
        direction = rng.uniform(-np.pi, np.pi)
        velocity = speed * dt * np.array([np.cos(direction), np.sin(direction)])
        noise = rng.normal(0.0, noise_sigma, size=(samples, 2)) if noise_sigma > 0 else np.zeros((samples, 2))
        for k in range(samples):
            step = k * stride
            cx, cy = start + step * velocity + noise[k]
            rows.append(TrackRow(f"track-{i:03d}", step, float(cx), float(cy), 0.6, 1.7))
    return rows
