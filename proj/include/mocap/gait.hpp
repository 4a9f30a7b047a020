#pragma once

#include <vector>

#include "mocap/trajectory.hpp"
#include "mocap/types.hpp"

namespace mocap {

/// Inclusive frame range during which a foot stays planted.
struct StanceInterval {
    int begin = 0;
    int end = 0;
};

struct FootEvents {
    std::vector<StanceInterval> left;
    std::vector<StanceInterval> right;
};

/// Spatio-temporal walk summary. Lengths are meters along the walk's own
/// longitudinal axis, widths across it, times in seconds, angle ranges in
/// degrees.
struct GaitReport {
    double speed_m_s = 0.0;
    double step_length_m = 0.0;
    double stride_length_m = 0.0;
    double stride_width_m = 0.0;
    double cadence_steps_min = 0.0;
    double double_support_s = 0.0;
    double single_support_left_s = 0.0;
    double single_support_right_s = 0.0;
    double hip_range_left_deg = 0.0;
    double hip_range_right_deg = 0.0;
    double knee_range_left_deg = 0.0;
    double knee_range_right_deg = 0.0;
};

/// Horizontal speed of one joint per frame: central differences on interior
/// frames, one-sided at the ends, scaled by the frame rate.
std::vector<double> horizontal_speeds(const Trajectory& trajectory, int joint_index);

/// Unit horizontal direction of net sacrum travel. Falls back to +x when the
/// sacrum barely moves.
Vec2 longitudinal_axis(const Trajectory& trajectory, const Skeleton& skeleton);

/// A foot is in stance where its ankle's horizontal speed is below
/// `velocity_threshold`; single-frame runs are discarded as jitter. Needs at
/// least 3 frames for the speed estimate.
FootEvents detect_foot_events(const Trajectory& trajectory, const Skeleton& skeleton,
                              double velocity_threshold);

/// Derives the full report from stance events. Lengths, speed, and cadence
/// are computed or the call throws GaitError naming the first quantity the
/// events cannot support; a support phase that never occurs reports 0 s.
///
/// Foot placements are per-interval mean ankle positions. Step length is the
/// longitudinal advance between consecutive opposite-foot placements, stride
/// length between consecutive same-foot placements (so a stride equals the
/// sum of its two steps), stride width the mean lateral separation across
/// step pairs. Support times are mean durations of the both-feet /
/// one-foot-only stance runs; cadence comes from first-to-last stance-begin
/// spacing.
GaitReport compute_gait_report(const Trajectory& trajectory, const Skeleton& skeleton,
                               const FootEvents& events);

}  // namespace mocap
