"""
Forecast Space Conversion

World-space forecasts are projected into the image for overlays; image-space
forecasts are lifted onto the ground plane through the bottom-center pixel of
each box so privileged policies can use them.
"""

from typing import Optional

import numpy as np

from ..geometry import BBox2D, CameraModel, Pose2D, ground_point_from_pixel, project_cylinder
from .track import Forecast, ForecastEntry, ForecastSpace, TrackBox


def project_box(camera: CameraModel, pose: Pose2D, box: TrackBox, space: ForecastSpace) -> Optional[BBox2D]:
    """Image box of a track box, None when not visible."""
    if space == ForecastSpace.IMAGE:
        return box.to_bbox()
    cylinder = box.to_cylinder()
    if cylinder is None:
        return None
    return project_cylinder(camera, pose, cylinder)


def project_forecast(camera: CameraModel, pose: Pose2D, forecast: Forecast) -> list[Optional[BBox2D]]:
    """Image boxes for every forecast entry (None where not visible)."""
    return [project_box(camera, pose, entry.box, forecast.space) for entry in forecast]


def lift_box(camera: CameraModel, pose: Pose2D, box: TrackBox) -> Optional[TrackBox]:
    """
    Ground-plane footprint of an image box.

    The bottom-center pixel gives the position, the bottom edge gives the
    width. Returns None when the bottom edge is at or above the horizon.
    """
    bottom = box.cy + box.h / 2.0
    center = ground_point_from_pixel(camera, pose, box.cx, bottom)
    left = ground_point_from_pixel(camera, pose, box.cx - box.w / 2.0, bottom)
    right = ground_point_from_pixel(camera, pose, box.cx + box.w / 2.0, bottom)
    if center is None or left is None or right is None:
        return None

    depth = float(pose.to_local(center)[0, 0])
    width = float(np.linalg.norm(right - left))
    height = box.h * depth / camera.focal_length
    return TrackBox(float(center[0]), float(center[1]), width, height)


def lift_forecast(camera: CameraModel, pose: Pose2D, forecast: Forecast) -> Optional[Forecast]:
    """World-space copy of an image-space forecast; entries that cannot be lifted are dropped."""
    if forecast.space == ForecastSpace.WORLD:
        return forecast
    entries = []
    for entry in forecast:
        lifted = lift_box(camera, pose, entry.box)
        if lifted is not None:
            entries.append(ForecastEntry(entry.offset, lifted))
    if not entries:
        return None
    return Forecast(forecast.object_id, forecast.algorithm, ForecastSpace.WORLD, tuple(entries))
