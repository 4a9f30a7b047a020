#include "mocap/camera.hpp"

#include <cmath>
#include <string>

#include "mocap/errors.hpp"

namespace mocap {

void Camera::validate() const {
    if (width <= 0 || height <= 0)
        throw ConfigError("camera: image dimensions must be positive");
    if (!(focal_px > 0.0))
        throw ConfigError("camera: focal length must be positive");
    Mat3 residual = rotation * rotation.transpose() - Mat3::Identity();
    if (residual.cwiseAbs().maxCoeff() > 1e-9)
        throw ConfigError("camera: rotation must be orthonormal");
}

Camera Camera::look_at(int width, int height, double focal_px, const Vec3& position,
                       const Vec3& target, const Vec3& up) {
    Vec3 forward = target - position;
    if (forward.norm() < 1e-12)
        throw ConfigError("camera: position and target coincide");
    Vec3 z = forward.normalized();
    Vec3 x = z.cross(up);
    if (x.norm() < 1e-9)
        throw ConfigError("camera: up direction is parallel to the view direction");
    x.normalize();
    Vec3 y = z.cross(x);

    Camera cam;
    cam.width = width;
    cam.height = height;
    cam.focal_px = focal_px;
    cam.center_u = width / 2.0;
    cam.center_v = height / 2.0;
    cam.rotation.row(0) = x;
    cam.rotation.row(1) = y;
    cam.rotation.row(2) = z;
    cam.translation = -cam.rotation * position;
    cam.validate();
    return cam;
}

std::optional<Projection> project_point(const Camera& camera, const Vec3& point) {
    Vec3 p = camera.rotation * point + camera.translation;
    if (p.z() <= 0.0) return std::nullopt;
    return Projection{camera.focal_px * p.x() / p.z() + camera.center_u,
                      camera.focal_px * p.y() / p.z() + camera.center_v, p.z()};
}

}  // namespace mocap
