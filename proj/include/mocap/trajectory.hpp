#pragma once

#include <string>
#include <vector>

#include "mocap/skeleton.hpp"
#include "mocap/types.hpp"

namespace mocap {

/// One tracked frame: the estimated pose, its score, and the joint positions
/// that pose produces.
struct TrajectoryFrame {
    PoseVector pose;
    double weight = 0.0;
    JointPositions joints;
};

struct Trajectory {
    double frame_rate_hz = 20.0;
    std::vector<TrajectoryFrame> frames;

    double frame_period_s() const { return 1.0 / frame_rate_hz; }
};

/// CSV layout: frame, time_s, the 31 dof values (rotations in degrees,
/// translations in meters), the 19 joint positions as x/y/z triples, weight.
/// Numbers print with enough digits to round-trip, so identical trajectories
/// serialize byte-identically.
void write_trajectory_csv(const Trajectory& trajectory, const Skeleton& skeleton,
                          const std::string& path);
Trajectory read_trajectory_csv(const Skeleton& skeleton, const std::string& path);

/// JSON form for programmatic use: dof/joint name arrays plus per-frame
/// records mirroring the CSV columns.
void write_trajectory_json(const Trajectory& trajectory, const Skeleton& skeleton,
                           const std::string& path);

}  // namespace mocap
