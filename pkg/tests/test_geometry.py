"""Tests for poses, the pinhole camera and cylinder projection."""

import math

import numpy as np
import pytest

from src.config import CameraSettings
from src.geometry import (
    BBox2D,
    CameraModel,
    Cylinder3D,
    Pose2D,
    ground_lookup,
    ground_point_from_pixel,
    normalize_angle,
    project_cylinder,
    project_point,
    world_to_camera,
)


class TestPose:

    def test_normalize_angle_range(self):
        assert normalize_angle(math.pi) == -math.pi
        assert normalize_angle(3 * math.pi / 2) == pytest.approx(-math.pi / 2)
        assert normalize_angle(-math.pi) == -math.pi
        assert normalize_angle(0.25) == pytest.approx(0.25)

    def test_to_local_lateral_is_positive_right(self):
        pose = Pose2D((0.0, 0.0), 0.0)
        local = pose.to_local(np.array([[1.0, -2.0]]))
        assert local[0] == pytest.approx([1.0, 2.0])

    def test_to_world_inverts_to_local(self):
        pose = Pose2D((3.0, -1.0), 0.7)
        points = np.array([[5.0, 2.0], [-4.0, 0.5]])
        assert pose.to_world(pose.to_local(points)) == pytest.approx(points)

    def test_heading_is_wrapped(self):
        assert Pose2D((0.0, 0.0), 2 * math.pi + 0.1).heading == pytest.approx(0.1)


class TestCameraModel:

    def test_intrinsics_from_fov(self, camera):
        assert camera.focal_length == pytest.approx(90.0)
        assert camera.principal_point == (90.0, 42.0)

    def test_from_settings_converts_degrees(self):
        camera = CameraModel.from_settings(CameraSettings(horizontal_fov_deg=60.0, pitch_deg=10.0))
        assert camera.horizontal_fov == pytest.approx(math.radians(60.0))
        assert camera.pitch == pytest.approx(math.radians(10.0))

    def test_invalid_fov_rejected(self):
        with pytest.raises(ValueError):
            CameraModel(horizontal_fov=math.pi)

    def test_point_at_mount_height_hits_principal_point(self, camera):
        pixel = project_point(camera, Pose2D((0.0, 0.0), 0.0), np.array([10.0, 0.0, 1.2]))
        assert pixel == pytest.approx([90.0, 42.0])

    def test_ground_point_projects_below_horizon(self, camera):
        pixel = project_point(camera, Pose2D((0.0, 0.0), 0.0), np.array([10.0, 0.0, 0.0]))
        assert pixel == pytest.approx([90.0, 42.0 + 90.0 * 1.2 / 10.0])

    def test_point_behind_camera_is_not_projected(self, camera):
        assert project_point(camera, Pose2D((0.0, 0.0), 0.0), np.array([-5.0, 0.0, 0.0])) is None

    def test_world_to_camera_axes(self, camera):
        cam = world_to_camera(camera, Pose2D((0.0, 0.0), 0.0), np.array([4.0, -1.0, 1.2]))
        # x right, y down, z forward
        assert cam == pytest.approx([1.0, 0.0, 4.0])


class TestCylinderProjection:

    def test_box_is_centered_on_axis(self, camera):
        box = project_cylinder(camera, Pose2D((0.0, 0.0), 0.0), Cylinder3D((10.0, 0.0), 0.3, 1.7))
        assert box is not None
        assert box.center[0] == pytest.approx(90.0)
        assert box.contains(90.0, 42.0 + 90.0 * 1.2 / 10.0)

    def test_box_spans_nearest_silhouette_points(self, camera):
        box = project_cylinder(camera, Pose2D((0.0, 0.0), 0.0), Cylinder3D((10.0, 0.0), 0.3, 1.7))
        assert box is not None
        assert box.y + box.h == pytest.approx(42.0 + 90.0 * 1.2 / 9.7)
        assert box.y == pytest.approx(42.0 - 90.0 * 0.5 / 9.7)

    def test_cylinder_behind_is_invisible(self, camera):
        assert project_cylinder(camera, Pose2D((0.0, 0.0), 0.0), Cylinder3D((-10.0, 0.0), 0.3, 1.7)) is None

    def test_box_matches_dense_silhouette(self, camera):
        box = project_cylinder(camera, Pose2D((0.0, 0.0), 0.0), Cylinder3D((6.0, 0.0), 0.3, 1.7))
        angles = np.linspace(0.0, 2 * math.pi, 20000, endpoint=False)
        x = 6.0 + 0.3 * np.cos(angles)
        y = 0.3 * np.sin(angles)
        u = np.concatenate([90.0 * -y / x + 90.0] * 2)
        v = np.concatenate([90.0 * 1.2 / x + 42.0, 90.0 * (1.2 - 1.7) / x + 42.0])
        assert box is not None
        assert box.x == pytest.approx(u.min(), abs=0.05)
        assert box.x + box.w == pytest.approx(u.max(), abs=0.05)
        assert box.y == pytest.approx(v.min(), abs=0.05)
        assert box.y + box.h == pytest.approx(v.max(), abs=0.05)

    def test_straddling_cylinder_is_clipped_at_near_plane(self, camera):
        # Cylinder reaching behind the camera on its right: the near-plane cut sets the box extent
        box = project_cylinder(camera, Pose2D((0.0, 0.0), 0.0), Cylinder3D((0.5, -1.0), 1.0, 1.7))
        near = camera.near_plane
        lateral = 1.0 + math.sqrt(1.0 - (near - 0.5) ** 2)
        assert box is not None
        assert box.x + box.w == pytest.approx(90.0 * lateral / near + 90.0, rel=0.01)
        assert box.y == pytest.approx(42.0 - 90.0 * 0.5 / near, abs=1e-6)
        assert box.y + box.h == pytest.approx(42.0 + 90.0 * 1.2 / near, abs=1e-6)

    def test_cylinder_needs_positive_size(self):
        with pytest.raises(ValueError):
            Cylinder3D((0.0, 0.0), 0.0, 1.7)

    def test_box_needs_nonnegative_size(self):
        with pytest.raises(ValueError):
            BBox2D(0.0, 0.0, -1.0, 2.0)


class TestGroundLookup:

    def test_back_projection_inverts_projection(self, camera):
        pose = Pose2D((2.0, 1.0), 0.3)
        target = np.array([12.0, 4.0, 0.0])
        u, v = project_point(camera, pose, target)
        assert ground_point_from_pixel(camera, pose, u, v) == pytest.approx(target[:2])

    def test_pixels_above_horizon_are_invalid(self, camera):
        local, valid = ground_lookup(camera)
        assert local.shape == (84, 180, 2)
        assert not valid[:42].any()
        assert valid[-1].all()

    def test_lookup_is_read_only(self, camera):
        local, valid = ground_lookup(camera)
        assert not local.flags.writeable
        assert not valid.flags.writeable

    def test_above_horizon_pixel_has_no_ground_point(self, camera):
        assert ground_point_from_pixel(camera, Pose2D((0.0, 0.0), 0.0), 90.0, 10.0) is None
