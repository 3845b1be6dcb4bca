"""
Rendering

Segmentation-style class rasters seen from the agent camera, BOX and AP
forecast overlays, three-frame observation stacks and PNG dumps.
"""

from .export import DumpManifest, FrameDump, load_label_png, save_label_png
from .labels import (
    APPROACHES,
    IMAGE_HEIGHT,
    IMAGE_WIDTH,
    PALETTE,
    LabelClass,
    LabelImage,
    OverlayKind,
    PedestrianStyle,
    RenderMode,
    palette_bytes,
    to_rgb,
)
from .observation import render_observation
from .overlays import ap_vertices, overlay_ap, overlay_box_forecast, shoelace_area
from .raster import Painter, box_pixels, far_to_near, polygon_pixels, rasterize_scene
from .stack import STACK_DEPTH, ObservationStack, push_frame

__all__ = [
    "APPROACHES",
    "DumpManifest",
    "FrameDump",
    "IMAGE_HEIGHT",
    "IMAGE_WIDTH",
    "LabelClass",
    "LabelImage",
    "ObservationStack",
    "OverlayKind",
    "PALETTE",
    "Painter",
    "PedestrianStyle",
    "RenderMode",
    "STACK_DEPTH",
    "ap_vertices",
    "box_pixels",
    "far_to_near",
    "load_label_png",
    "overlay_ap",
    "overlay_box_forecast",
    "palette_bytes",
    "polygon_pixels",
    "push_frame",
    "rasterize_scene",
    "render_observation",
    "save_label_png",
    "shoelace_area",
    "to_rgb",
]
