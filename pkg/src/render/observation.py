"""
Observation composition: scene raster plus the forecast overlay of the
render mode, pedestrians' overlays painted far to near.
"""

from typing import Mapping, Optional

from ..forecasting import Forecast, project_box, project_forecast
from ..geometry import CameraModel, project_cylinder
from ..sim import WorldState
from .labels import LabelImage, OverlayKind, RenderMode
from .overlays import overlay_ap, overlay_box_forecast
from .raster import Painter, far_to_near, rasterize_scene


def render_observation(
    world: WorldState,
    camera: CameraModel,
    mode: RenderMode,
    forecasts: Optional[Mapping[str, Forecast]] = None,
    painter: Optional[Painter] = None,
) -> LabelImage:
    """
    Render one observation frame.

    World-space forecasts are projected from the current agent pose. The AP
    overlay starts at the pedestrian's current projected box and ends at the
    box of the final forecast offset.
    """
    image = rasterize_scene(world, camera, mode, painter)
    if mode.overlay == OverlayKind.NONE or not forecasts:
        return image

    pose = world.agent.pose
    for index in far_to_near(world):
        ped = world.pedestrians[index]
        forecast = forecasts.get(ped.ped_id)
        if forecast is None or len(forecast) == 0:
            continue

        if mode.overlay == OverlayKind.BOX:
            image = overlay_box_forecast(image, project_forecast(camera, pose, forecast))
            continue

        current = project_cylinder(camera, pose, ped.extent)
        final = project_box(camera, pose, forecast.final, forecast.space)
        if current is not None and final is not None:
            image = overlay_ap(image, current, final)
    return image
