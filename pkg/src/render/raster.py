"""
Scene Rasterizer
================
Paints the ground (road, boundary, goal) through the per-pixel ground lookup
of the camera, then pedestrians far to near.

Pixel (c, r) spans [c, c+1) x [r, r+1). Boxes use half-open integer bounds
(floor of the real coordinates, exclusive right/bottom); polygons are filled
by scanline over pixel centers.
"""

import math
from typing import Callable, Optional

import numpy as np
from shapely.geometry import MultiPoint, Polygon
from skimage.draw import polygon as draw_polygon

from ..geometry import BBox2D, CameraModel, ground_lookup, project_cylinder, project_silhouette
from ..sim import WorldState, scene_geometry
from .labels import LabelClass, LabelImage, PedestrianStyle, RenderMode

# Paints extra classes (e.g. guidance markers) onto a writable class array
Painter = Callable[[np.ndarray, WorldState], None]


def box_pixels(box: BBox2D, width: int, height: int) -> tuple[slice, slice]:
    """Row and column slices covered by a box, clipped to the image."""
    c0 = min(max(math.floor(box.x), 0), width)
    c1 = min(max(math.floor(box.x + box.w), 0), width)
    r0 = min(max(math.floor(box.y), 0), height)
    r1 = min(max(math.floor(box.y + box.h), 0), height)
    return slice(r0, max(r1, r0)), slice(c0, max(c1, c0))


def polygon_pixels(xs: np.ndarray, ys: np.ndarray, width: int, height: int) -> tuple[np.ndarray, np.ndarray]:
    """Rows and columns of pixels whose centers fall inside a polygon given in image coordinates."""
    # skimage puts pixel centers on integer coordinates
    return draw_polygon(np.asarray(ys) - 0.5, np.asarray(xs) - 0.5, shape=(height, width))


def paint_ground(classes: np.ndarray, world: WorldState, camera: CameraModel) -> None:
    local, valid = ground_lookup(camera)
    geometry = scene_geometry(world.config)
    points = world.agent.pose.to_world(local.reshape(-1, 2))
    xs, ys = points[:, 0], points[:, 1]
    flat_valid = valid.reshape(-1)

    road = geometry.road_mask(xs, ys) & flat_valid
    boundary = geometry.boundary_mask(xs, ys) & flat_valid
    gx, gy = world.config.goal
    goal = (np.hypot(xs - gx, ys - gy) <= world.config.goal_radius) & flat_valid

    flat = classes.reshape(-1)
    flat[road] = LabelClass.ROAD
    flat[boundary] = LabelClass.BOUNDARY
    flat[goal] = LabelClass.GOAL


def _paint_contour(classes: np.ndarray, world: WorldState, camera: CameraModel, ped_index: int) -> None:
    ped = world.pedestrians[ped_index]
    pixels = project_silhouette(camera, world.agent.pose, ped.extent)
    if pixels is None:
        return
    hull = MultiPoint([tuple(p) for p in pixels]).convex_hull
    height, width = classes.shape
    if isinstance(hull, Polygon):
        xs, ys = np.asarray(hull.exterior.coords).T
        rr, cc = polygon_pixels(xs, ys, width, height)
        classes[rr, cc] = LabelClass.PEDESTRIAN
        return
    # Degenerate hull: fall back to its bounding box
    minx, miny, maxx, maxy = hull.bounds
    rows, cols = box_pixels(BBox2D(minx, miny, maxx - minx, maxy - miny), width, height)
    classes[rows, cols] = LabelClass.PEDESTRIAN


def _paint_box(classes: np.ndarray, world: WorldState, camera: CameraModel, ped_index: int) -> None:
    ped = world.pedestrians[ped_index]
    box = project_cylinder(camera, world.agent.pose, ped.extent)
    if box is None:
        return
    height, width = classes.shape
    rows, cols = box_pixels(box, width, height)
    classes[rows, cols] = LabelClass.PEDESTRIAN


def far_to_near(world: WorldState) -> list[int]:
    """Pedestrian indices sorted by decreasing distance to the agent (ties by id)."""
    ax, ay = world.agent.pose.position
    keyed = [
        (-math.hypot(p.position[0] - ax, p.position[1] - ay), p.ped_id, i)
        for i, p in enumerate(world.pedestrians)
    ]
    return [i for _, _, i in sorted(keyed)]


def rasterize_scene(
    world: WorldState,
    camera: CameraModel,
    mode: RenderMode,
    painter: Optional[Painter] = None,
) -> LabelImage:
    """
    Render the segmentation-style frame seen from the agent.

    Args:
        world: World to render
        camera: Camera mounted on the agent
        mode: Pedestrian style (overlays are added separately)
        painter: Optional hook that paints extra classes after the ground and
            before pedestrians

    Returns:
        LabelImage of the camera resolution
    """
    classes = np.zeros((camera.image_height, camera.image_width), dtype=np.uint8)
    paint_ground(classes, world, camera)
    if painter is not None:
        painter(classes, world)

    paint = _paint_box if mode.pedestrian_style == PedestrianStyle.BOX else _paint_contour
    for index in far_to_near(world):
        paint(classes, world, camera, index)
    return LabelImage(classes)
