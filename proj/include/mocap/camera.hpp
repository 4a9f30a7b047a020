#pragma once

#include <optional>

#include "mocap/types.hpp"

namespace mocap {

/// Pinhole camera with distortion-free projection.
///
/// World points map to the camera frame as p_cam = rotation * p_world +
/// translation; the camera looks along its local +z axis, +x runs right in
/// the image and +y runs down. Pixel (ix, iy) covers the unit square whose
/// center is (ix + 0.5, iy + 0.5).
struct Camera {
    int width = 320;
    int height = 240;
    double focal_px = 400.0;   // same focal length for both axes
    double center_u = 160.0;   // principal point, pixel units
    double center_v = 120.0;
    Mat3 rotation = Mat3::Identity();
    Vec3 translation = Vec3::Zero();

    /// Throws ConfigError on non-positive dimensions or focal length, or a
    /// rotation that is not orthonormal to 1e-9.
    void validate() const;

    /// Camera with the principal point at the image center and an extrinsic
    /// placing it at `position` looking toward `target` with `up` roughly
    /// opposite image +y. Throws ConfigError if position equals target or
    /// `up` is parallel to the view direction.
    static Camera look_at(int width, int height, double focal_px, const Vec3& position,
                          const Vec3& target, const Vec3& up = Vec3(0, 0, 1));
};

/// A world point on the image plane with its camera-frame depth.
struct Projection {
    double u = 0.0;
    double v = 0.0;
    double depth = 0.0;
};

/// Projects a world point; nullopt when the point is at or behind the camera
/// plane (depth <= 0).
std::optional<Projection> project_point(const Camera& camera, const Vec3& point);

}  // namespace mocap
