#pragma once

#include <array>
#include <cstddef>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace mocap {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Body model dimensions. The articulated model always has 19 joints joined
/// by 18 parent links, 17 of which carry flesh volumes, and 31 degrees of
/// freedom (3 root translations + 3 root rotations + 25 joint rotations).
inline constexpr int kNumJoints = 19;
inline constexpr int kNumSegments = 17;
inline constexpr int kNumDofs = 31;

/// One body configuration: 31 scalars ordered as the skeleton's DOF table.
/// Translations are meters, rotations radians.
struct PoseVector {
    std::array<double, kNumDofs> values{};

    double& operator[](int i) { return values[static_cast<std::size_t>(i)]; }
    double operator[](int i) const { return values[static_cast<std::size_t>(i)]; }

    bool operator==(const PoseVector& other) const { return values == other.values; }
};

/// World-frame 3D positions of the 19 joints, ordered as Skeleton::joints.
struct JointPositions {
    std::array<Vec3, kNumJoints> world;

    const Vec3& operator[](int i) const { return world[static_cast<std::size_t>(i)]; }
    Vec3& operator[](int i) { return world[static_cast<std::size_t>(i)]; }
};

inline constexpr double kPi = 3.14159265358979323846;

inline constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

}  // namespace mocap
