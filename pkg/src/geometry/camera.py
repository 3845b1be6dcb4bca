"""
Camera Geometry
===============
Poses, the pinhole camera model, and projection of pedestrian volumes into
image-space bounding boxes.

Frames:
- World: x/y on the ground plane, z up, heading CCW from +x.
- Camera: z forward, x right, y down.
- Image: column u grows right, row v grows down; pixel (c, r) spans [c, c+1) x [r, r+1).
"""

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from ..config import CameraSettings


def normalize_angle(angle: float) -> float:
    """Wrap an angle to [-pi, pi)."""
    wrapped = (angle + math.pi) % (2.0 * math.pi) - math.pi
    # The modulo can land on +pi through rounding
    return -math.pi if wrapped >= math.pi else wrapped


@dataclass(frozen=True)
class Pose2D:
    """Ground-plane placement of the agent or a pedestrian."""
    position: tuple[float, float]
    heading: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "heading", normalize_angle(self.heading))

    @property
    def forward(self) -> np.ndarray:
        return np.array([math.cos(self.heading), math.sin(self.heading)])

    @property
    def right(self) -> np.ndarray:
        return np.array([math.sin(self.heading), -math.cos(self.heading)])

    def to_local(self, points: np.ndarray) -> np.ndarray:
        """
        Express ground points in the pose frame.

        Args:
            points: (N, 2) world points

        Returns:
            (N, 2) array of (longitudinal, lateral) coordinates, lateral positive to the right
        """
        delta = np.atleast_2d(points) - np.asarray(self.position)
        return np.stack([delta @ self.forward, delta @ self.right], axis=-1)

    def to_world(self, local: np.ndarray) -> np.ndarray:
        """Inverse of ``to_local``."""
        local = np.atleast_2d(local)
        return (
            np.asarray(self.position)
            + local[:, :1] * self.forward
            + local[:, 1:2] * self.right
        )


@dataclass(frozen=True)
class CameraModel:
    """
    Pinhole camera rigidly mounted on the agent.

    Focal length and principal point are derived from the horizontal field
    of view and the image resolution (square pixels).
    """
    mount_height: float = 1.2
    pitch: float = 0.0
    horizontal_fov: float = math.pi / 2
    image_width: int = 180
    image_height: int = 84
    near_plane: float = 0.1
    circle_samples: int = 32
    max_ground_distance: float = 80.0

    def __post_init__(self) -> None:
        if not 0.0 < self.horizontal_fov < math.pi:
            raise ValueError(f"horizontal_fov must lie in (0, pi), got {self.horizontal_fov}")
        if self.image_width <= 0 or self.image_height <= 0:
            raise ValueError("image dimensions must be positive")

    @classmethod
    def from_settings(cls, settings: CameraSettings) -> "CameraModel":
        return cls(
            mount_height=settings.mount_height,
            pitch=math.radians(settings.pitch_deg),
            horizontal_fov=math.radians(settings.horizontal_fov_deg),
            image_width=settings.image_width,
            image_height=settings.image_height,
            near_plane=settings.near_plane,
            circle_samples=settings.circle_samples,
            max_ground_distance=settings.max_ground_distance,
        )

    @property
    def focal_length(self) -> float:
        return (self.image_width / 2.0) / math.tan(self.horizontal_fov / 2.0)

    @property
    def principal_point(self) -> tuple[float, float]:
        return (self.image_width / 2.0, self.image_height / 2.0)

    def axes(self, pose: Pose2D) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """World-frame unit vectors of the camera x (right), y (down) and z (forward) axes."""
        fwd = np.array([math.cos(pose.heading), math.sin(pose.heading), 0.0])
        right = np.array([math.sin(pose.heading), -math.cos(pose.heading), 0.0])
        down = np.array([0.0, 0.0, -1.0])
        cp, sp = math.cos(self.pitch), math.sin(self.pitch)
        z_axis = cp * fwd + sp * down
        y_axis = -sp * fwd + cp * down
        return right, y_axis, z_axis

    def origin(self, pose: Pose2D) -> np.ndarray:
        return np.array([pose.position[0], pose.position[1], self.mount_height])


@dataclass(frozen=True)
class Cylinder3D:
    """World-space pedestrian volume standing on the ground plane."""
    center: tuple[float, float]
    radius: float
    height: float

    def __post_init__(self) -> None:
        if self.radius <= 0 or self.height <= 0:
            raise ValueError(f"cylinder needs radius > 0 and height > 0, got {self.radius}, {self.height}")

    def silhouette_points(self, samples: int) -> np.ndarray:
        """Points on the bottom and top circles, (2 * samples, 3)."""
        angles = np.arange(samples) * (2.0 * math.pi / samples)
        xs = self.center[0] + self.radius * np.cos(angles)
        ys = self.center[1] + self.radius * np.sin(angles)
        bottom = np.stack([xs, ys, np.zeros(samples)], axis=-1)
        top = np.stack([xs, ys, np.full(samples, self.height)], axis=-1)
        return np.concatenate([bottom, top])


@dataclass(frozen=True)
class BBox2D:
    """Real-valued image box: upper-left (x, y), width w, height h in pixels."""
    x: float
    y: float
    w: float
    h: float

    def __post_init__(self) -> None:
        if self.w < 0 or self.h < 0:
            raise ValueError(f"box needs w >= 0 and h >= 0, got {self.w}, {self.h}")

    @property
    def center(self) -> tuple[float, float]:
        return (self.x + self.w / 2.0, self.y + self.h / 2.0)

    @property
    def bottom_center(self) -> tuple[float, float]:
        return (self.x + self.w / 2.0, self.y + self.h)

    def contains(self, u: float, v: float, tolerance: float = 1e-9) -> bool:
        return (
            self.x - tolerance <= u <= self.x + self.w + tolerance
            and self.y - tolerance <= v <= self.y + self.h + tolerance
        )


def world_to_camera(camera: CameraModel, pose: Pose2D, points: np.ndarray) -> np.ndarray:
    """
    Rigidly transform world points into the camera frame.

    Args:
        camera: Camera model (mount height and pitch)
        pose: Agent pose carrying the camera
        points: (3,) or (N, 3) world points

    Returns:
        Camera-frame points with the same leading shape
    """
    pts = np.asarray(points, dtype=float)
    x_axis, y_axis, z_axis = camera.axes(pose)
    delta = pts - camera.origin(pose)
    return np.stack([delta @ x_axis, delta @ y_axis, delta @ z_axis], axis=-1)


def _pixels_from_camera(camera: CameraModel, cam_points: np.ndarray) -> np.ndarray:
    f = camera.focal_length
    cx, cy = camera.principal_point
    z = cam_points[..., 2]
    return np.stack([f * cam_points[..., 0] / z + cx, f * cam_points[..., 1] / z + cy], axis=-1)


def project_point(camera: CameraModel, pose: Pose2D, point: np.ndarray) -> Optional[np.ndarray]:
    """
    Pinhole projection of a single world point.

    Returns:
        Pixel (u, v), or None when the point is at or behind the near plane
    """
    cam = world_to_camera(camera, pose, point)
    if cam[2] <= camera.near_plane:
        return None
    return _pixels_from_camera(camera, cam)


def _ring_edges(samples: int) -> np.ndarray:
    """Index pairs of the silhouette edges: both circles plus the vertical sides."""
    ring = np.arange(samples)
    step = (ring + 1) % samples
    return np.concatenate([
        np.stack([ring, step], axis=-1),
        np.stack([ring + samples, step + samples], axis=-1),
        np.stack([ring, ring + samples], axis=-1),
    ])


def _clip_near(cam_points: np.ndarray, edges: np.ndarray, near: float) -> np.ndarray:
    """Points in front of the near plane plus every edge's crossing of it."""
    start, end = cam_points[edges[:, 0]], cam_points[edges[:, 1]]
    crossing = (start[:, 2] > near) != (end[:, 2] > near)
    start, end = start[crossing], end[crossing]
    t = (near - start[:, 2]) / (end[:, 2] - start[:, 2])
    cut = start + t[:, None] * (end - start)
    return np.concatenate([cam_points[cam_points[:, 2] > near], cut])


def project_cylinder(camera: CameraModel, pose: Pose2D, cylinder: Cylinder3D) -> Optional[BBox2D]:
    """
    Tight image box around the projected silhouette samples of a cylinder.

    Silhouette edges are clipped at the near plane. Returns None when nothing
    is in front of the camera or the box misses the image entirely.
    """
    samples = camera.circle_samples
    points = cylinder.silhouette_points(samples)
    # Center axis endpoints keep the box consistent with the projected center line
    axis = np.array([
        [cylinder.center[0], cylinder.center[1], 0.0],
        [cylinder.center[0], cylinder.center[1], cylinder.height],
    ])
    cam = world_to_camera(camera, pose, np.concatenate([points, axis]))
    edges = np.concatenate([_ring_edges(samples), [[2 * samples, 2 * samples + 1]]])
    visible = _clip_near(cam, edges, camera.near_plane)
    if len(visible) == 0:
        return None

    pixels = _pixels_from_camera(camera, visible)
    u_min, v_min = pixels.min(axis=0)
    u_max, v_max = pixels.max(axis=0)

    if u_max < 0 or v_max < 0 or u_min > camera.image_width or v_min > camera.image_height:
        return None
    return BBox2D(float(u_min), float(v_min), float(u_max - u_min), float(v_max - v_min))


def project_silhouette(camera: CameraModel, pose: Pose2D, cylinder: Cylinder3D) -> Optional[np.ndarray]:
    """Projected silhouette sample pixels (N, 2) of the visible part of a cylinder."""
    samples = camera.circle_samples
    cam = world_to_camera(camera, pose, cylinder.silhouette_points(samples))
    visible = _clip_near(cam, _ring_edges(samples), camera.near_plane)
    if len(visible) == 0:
        return None
    return _pixels_from_camera(camera, visible)


@lru_cache(maxsize=16)
def ground_lookup(camera: CameraModel) -> tuple[np.ndarray, np.ndarray]:
    """
    Ground-plane intersection of every pixel-center ray, in the agent frame.

    Returns:
        (local, valid): local is (H, W, 2) of (longitudinal, lateral) meters;
        valid marks rays that hit the ground within ``max_ground_distance``.
    """
    f = camera.focal_length
    cx, cy = camera.principal_point
    cols = np.arange(camera.image_width) + 0.5
    rows = np.arange(camera.image_height) + 0.5
    uu, vv = np.meshgrid(cols, rows)

    # Ray in the camera frame, then rotated into (forward, right, down) of the agent
    ray_x = (uu - cx) / f
    ray_y = (vv - cy) / f
    cp, sp = math.cos(camera.pitch), math.sin(camera.pitch)
    forward = cp - sp * ray_y
    down = sp + cp * ray_y
    right = ray_x

    with np.errstate(divide="ignore", invalid="ignore"):
        scale = np.where(down > 1e-9, camera.mount_height / down, np.inf)
    longitudinal = forward * scale
    lateral = right * scale
    valid = np.isfinite(scale) & (longitudinal > 0) & (longitudinal <= camera.max_ground_distance)

    local = np.stack([np.where(valid, longitudinal, 0.0), np.where(valid, lateral, 0.0)], axis=-1)
    local.setflags(write=False)
    valid.setflags(write=False)
    return local, valid


def ground_point_from_pixel(camera: CameraModel, pose: Pose2D, u: float, v: float) -> Optional[np.ndarray]:
    """Back-project a pixel onto the ground plane; None above the horizon."""
    f = camera.focal_length
    cx, cy = camera.principal_point
    ray_y = (v - cy) / f
    cp, sp = math.cos(camera.pitch), math.sin(camera.pitch)
    down = sp + cp * ray_y
    if down <= 1e-9:
        return None
    scale = camera.mount_height / down
    local = np.array([[(cp - sp * ray_y) * scale, (u - cx) / f * scale]])
    return pose.to_world(local)[0]
