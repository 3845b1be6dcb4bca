"""
Ground-Truth Forecasts

Future boxes read off the simulator by advancing a copy of a pedestrian's
deterministic motion.
"""

from typing import Optional

from ..geometry import CameraModel, project_cylinder
from ..sim import WorldState, pedestrian_advance
from .errors import UnknownObjectError
from .track import Forecast, ForecastAlgorithm, ForecastEntry, ForecastSpace, TrackBox, forecast_offsets


def gt_forecast(
    world: WorldState,
    object_id: str,
    horizon: int,
    stride: int,
    space: ForecastSpace = ForecastSpace.WORLD,
    camera: Optional[CameraModel] = None,
) -> Optional[Forecast]:
    """
    True future boxes of one pedestrian at offsets {s, ..., H*s}.

    The pedestrian is advanced frame by frame with the episode's ``dt`` so the
    result matches the realized future bit for bit. Image-space forecasts are
    projected from the current agent pose; if any future box falls outside
    the view, no forecast is produced (None).

    Raises:
        UnknownObjectError: If no pedestrian has ``object_id``
        ValueError: If an image-space forecast is requested without a camera
    """
    ped = world.pedestrian(object_id)
    if ped is None:
        raise UnknownObjectError(f"no pedestrian '{object_id}' in the world", object_id)
    if space == ForecastSpace.IMAGE and camera is None:
        raise ValueError("image-space ground truth needs a camera")

    dt = world.config.dt
    offsets = forecast_offsets(horizon, stride)
    entries = []
    frame = 0
    for offset in offsets:
        while frame < offset:
            ped = pedestrian_advance(ped, dt)
            frame += 1
        if space == ForecastSpace.WORLD:
            entries.append(ForecastEntry(offset, TrackBox.from_cylinder(ped.extent)))
            continue
        box = project_cylinder(camera, world.agent.pose, ped.extent)
        if box is None:
            return None
        entries.append(ForecastEntry(offset, TrackBox.from_bbox(box)))

    return Forecast(object_id, ForecastAlgorithm.GT, space, tuple(entries))
