"""
Geometry

Poses, the pinhole camera, and projection of pedestrian cylinders into
image-space bounding boxes.
"""

from .camera import (
    BBox2D,
    CameraModel,
    Cylinder3D,
    Pose2D,
    ground_lookup,
    ground_point_from_pixel,
    normalize_angle,
    project_cylinder,
    project_point,
    project_silhouette,
    world_to_camera,
)

__all__ = [
    "BBox2D",
    "CameraModel",
    "Cylinder3D",
    "Pose2D",
    "ground_lookup",
    "ground_point_from_pixel",
    "normalize_angle",
    "project_cylinder",
    "project_point",
    "project_silhouette",
    "world_to_camera",
]
