"""
Observation Stack

Three frames, oldest to newest. A reset replicates the first frame.
"""

from dataclasses import dataclass

import numpy as np

from .labels import LabelImage

STACK_DEPTH = 3


@dataclass(frozen=True)
class ObservationStack:
    frames: tuple[LabelImage, ...]

    def __post_init__(self) -> None:
        if len(self.frames) != STACK_DEPTH:
            raise ValueError(f"observation stack holds {STACK_DEPTH} frames, got {len(self.frames)}")

    @classmethod
    def reset(cls, frame: LabelImage) -> "ObservationStack":
        return cls((frame,) * STACK_DEPTH)

    @property
    def newest(self) -> LabelImage:
        return self.frames[-1]

    def to_tensor(self) -> np.ndarray:
        """(3, H, W) uint8, oldest first."""
        return np.stack([f.classes for f in self.frames])


def push_frame(stack: ObservationStack, frame: LabelImage) -> ObservationStack:
    """Drop the oldest frame and append ``frame``."""
    return ObservationStack(stack.frames[1:] + (frame,))
