"""
Visual Forecast Overlays
========================
BOX draws every predicted box as a filled rectangle. AP (augmented path)
fills the quadrilateral joining the bottom edge of the current box to the
bottom edge of the final predicted box.

Overlays never paint over pedestrian pixels.
"""

import math
from typing import Iterable, Optional

import numpy as np
from skimage.draw import line as draw_line

from ..geometry import BBox2D
from .labels import LabelClass, LabelImage
from .raster import box_pixels, polygon_pixels

# Below this many square pixels the AP quad is drawn as its outline
DEGENERATE_AREA = 1.0


def overlay_box_forecast(image: LabelImage, boxes: Iterable[Optional[BBox2D]]) -> LabelImage:
    """Fill each box with ``forecast_box``, clipped to the image, beneath pedestrians."""
    classes = image.mutable()
    free = classes != LabelClass.PEDESTRIAN
    for box in boxes:
        if box is None:
            continue
        rows, cols = box_pixels(box, image.width, image.height)
        region = np.zeros_like(free)
        region[rows, cols] = True
        classes[region & free] = LabelClass.FORECAST_BOX
    return LabelImage(classes)


def ap_vertices(current: BBox2D, final: BBox2D) -> np.ndarray:
    """
    Quad vertices, (4, 2) as (x, y): bottom-left and bottom-right of the current
    box, then bottom-right and bottom-left of the final box.
    """
    return np.array([
        [current.x, current.y + current.h],
        [current.x + current.w, current.y + current.h],
        [final.x + final.w, final.y + final.h],
        [final.x, final.y + final.h],
    ], dtype=float)


def shoelace_area(vertices: np.ndarray) -> float:
    x, y = vertices[:, 0], vertices[:, 1]
    return 0.5 * abs(float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))))


def _outline_pixels(vertices: np.ndarray, width: int, height: int) -> tuple[np.ndarray, np.ndarray]:
    rows, cols = [], []
    ring = np.vstack([vertices, vertices[:1]])
    for (x0, y0), (x1, y1) in zip(ring[:-1], ring[1:]):
        rr, cc = draw_line(math.floor(y0), math.floor(x0), math.floor(y1), math.floor(x1))
        rows.append(rr)
        cols.append(cc)
    rr, cc = np.concatenate(rows), np.concatenate(cols)
    inside = (rr >= 0) & (rr < height) & (cc >= 0) & (cc < width)
    return rr[inside], cc[inside]


def overlay_ap(image: LabelImage, current: BBox2D, final: BBox2D) -> LabelImage:
    """
    Fill the augmented-path quad with ``forecast_path``, clipped, beneath pedestrians.

    A stationary object collapses the quad onto the bottom edge of its box;
    that segment is still drawn.
    """
    vertices = ap_vertices(current, final)
    if shoelace_area(vertices) < DEGENERATE_AREA:
        rr, cc = _outline_pixels(vertices, image.width, image.height)
    else:
        rr, cc = polygon_pixels(vertices[:, 0], vertices[:, 1], image.width, image.height)

    classes = image.mutable()
    keep = classes[rr, cc] != LabelClass.PEDESTRIAN
    classes[rr[keep], cc[keep]] = LabelClass.FORECAST_PATH
    return LabelImage(classes)
