"""
Label Images
============
Class-id rasters, the fixed class palette and render modes.

Class precedence (highest first): pedestrian > forecast_box / forecast_path >
goal > boundary > road > background. ``guidance`` is reserved for caller
painters and sits beneath the forecast overlays.
"""

from dataclasses import dataclass
from enum import Enum, IntEnum

import numpy as np

IMAGE_WIDTH = 180
IMAGE_HEIGHT = 84


class LabelClass(IntEnum):
    """Per-pixel class ids."""
    BACKGROUND = 0
    ROAD = 1
    BOUNDARY = 2
    GOAL = 3
    PEDESTRIAN = 4
    FORECAST_BOX = 5
    FORECAST_PATH = 6
    GUIDANCE = 7


PALETTE: dict[LabelClass, tuple[int, int, int]] = {
    LabelClass.BACKGROUND: (0, 0, 0),
    LabelClass.ROAD: (128, 64, 128),
    LabelClass.BOUNDARY: (244, 35, 232),
    LabelClass.GOAL: (0, 200, 0),
    LabelClass.PEDESTRIAN: (220, 20, 60),
    LabelClass.FORECAST_BOX: (255, 200, 0),
    LabelClass.FORECAST_PATH: (0, 170, 255),
    LabelClass.GUIDANCE: (255, 255, 255),
}


class PedestrianStyle(str, Enum):
    CONTOUR = "contour"
    BOX = "box"


class OverlayKind(str, Enum):
    NONE = "none"
    BOX = "box"
    AP = "ap"


@dataclass(frozen=True)
class RenderMode:
    """How pedestrians are drawn and which forecast overlay is added."""
    pedestrian_style: PedestrianStyle = PedestrianStyle.CONTOUR
    overlay: OverlayKind = OverlayKind.NONE


APPROACHES: dict[str, RenderMode] = {
    "seg": RenderMode(PedestrianStyle.CONTOUR, OverlayKind.NONE),
    "seg-box": RenderMode(PedestrianStyle.BOX, OverlayKind.NONE),
    "seg-box+box": RenderMode(PedestrianStyle.BOX, OverlayKind.BOX),
    "seg+ap": RenderMode(PedestrianStyle.CONTOUR, OverlayKind.AP),
}


@dataclass(frozen=True, eq=False)
class LabelImage:
    """
    One class-id frame, (height, width) uint8.

    Treated as a value: operations return new images and never write into an
    existing one.
    """
    classes: np.ndarray

    def __post_init__(self) -> None:
        if self.classes.ndim != 2 or self.classes.dtype != np.uint8:
            raise ValueError(f"label image must be 2D uint8, got {self.classes.shape} {self.classes.dtype}")
        if self.classes.size and int(self.classes.max()) > max(LabelClass):
            raise ValueError(f"invalid class id {int(self.classes.max())}")
        self.classes.setflags(write=False)

    @classmethod
    def blank(cls, width: int = IMAGE_WIDTH, height: int = IMAGE_HEIGHT) -> "LabelImage":
        return cls(np.zeros((height, width), dtype=np.uint8))

    @property
    def width(self) -> int:
        return self.classes.shape[1]

    @property
    def height(self) -> int:
        return self.classes.shape[0]

    def mutable(self) -> np.ndarray:
        """Writable copy of the class array."""
        return self.classes.copy()

    def mask(self, label: LabelClass) -> np.ndarray:
        return self.classes == label

    def present(self) -> set[LabelClass]:
        return {LabelClass(int(c)) for c in np.unique(self.classes)}

    def tobytes(self) -> bytes:
        return self.classes.tobytes()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LabelImage):
            return NotImplemented
        return np.array_equal(self.classes, other.classes)

    def __hash__(self) -> int:
        return hash(self.tobytes())


def palette_bytes() -> list[int]:
    """Flat 768-entry RGB palette for paletted PNGs."""
    flat = [0] * 768
    for label, (r, g, b) in PALETTE.items():
        flat[3 * label:3 * label + 3] = [r, g, b]
    return flat


def to_rgb(image: LabelImage) -> np.ndarray:
    """(H, W, 3) uint8 visualization with the fixed palette."""
    lut = np.zeros((256, 3), dtype=np.uint8)
    for label, color in PALETTE.items():
        lut[label] = color
    return lut[image.classes]
