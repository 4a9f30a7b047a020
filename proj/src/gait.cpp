#include "mocap/gait.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mocap/errors.hpp"

namespace mocap {

namespace {

int required_joint(const Skeleton& skeleton, const char* name) {
    int idx = skeleton.joint_index(name);
    if (idx < 0) throw ConfigError(std::string("gait: skeleton lacks joint '") + name + "'");
    return idx;
}

int required_dof(const Skeleton& skeleton, const char* name) {
    int idx = skeleton.dof_index(name);
    if (idx < 0) throw ConfigError(std::string("gait: skeleton lacks dof '") + name + "'");
    return idx;
}

Vec2 horizontal(const Vec3& p) { return Vec2(p.x(), p.y()); }

std::vector<StanceInterval> stance_runs(const std::vector<double>& speeds,
                                        double threshold) {
    std::vector<StanceInterval> runs;
    int begin = -1;
    for (int i = 0; i <= static_cast<int>(speeds.size()); ++i) {
        bool stance =
            i < static_cast<int>(speeds.size()) && speeds[static_cast<std::size_t>(i)] < threshold;
        if (stance && begin < 0) begin = i;
        if (!stance && begin >= 0) {
            if (i - begin >= 2) runs.push_back({begin, i - 1});
            begin = -1;
        }
    }
    return runs;
}

struct Placement {
    int foot = 0;  // 0 left, 1 right
    int begin_frame = 0;
    Vec2 position = Vec2::Zero();
};

Vec2 mean_ankle_position(const Trajectory& trajectory, int joint,
                         const StanceInterval& interval) {
    Vec2 sum = Vec2::Zero();
    for (int f = interval.begin; f <= interval.end; ++f)
        sum += horizontal(trajectory.frames[static_cast<std::size_t>(f)].joints[joint]);
    return sum / static_cast<double>(interval.end - interval.begin + 1);
}

bool in_stance(const std::vector<StanceInterval>& intervals, int frame) {
    for (const StanceInterval& s : intervals)
        if (frame >= s.begin && frame <= s.end) return true;
    return false;
}

/// Mean duration of maximal true-runs, in seconds; zero when none.
double mean_run_duration(const std::vector<char>& flags, double dt) {
    double total = 0.0;
    int runs = 0;
    int begin = -1;
    for (int i = 0; i <= static_cast<int>(flags.size()); ++i) {
        bool on = i < static_cast<int>(flags.size()) && flags[static_cast<std::size_t>(i)];
        if (on && begin < 0) begin = i;
        if (!on && begin >= 0) {
            total += (i - begin) * dt;
            ++runs;
            begin = -1;
        }
    }
    return runs > 0 ? total / runs : 0.0;
}

double angle_range_deg(const Trajectory& trajectory, int dof) {
    double lo = trajectory.frames.front().pose[dof];
    double hi = lo;
    for (const TrajectoryFrame& f : trajectory.frames) {
        lo = std::min(lo, f.pose[dof]);
        hi = std::max(hi, f.pose[dof]);
    }
    return rad_to_deg(hi - lo);
}

}  // namespace

std::vector<double> horizontal_speeds(const Trajectory& trajectory, int joint_index) {
    const std::size_t n = trajectory.frames.size();
    if (n < 3)
        throw GaitError("gait: need at least 3 frames to estimate speeds, got " +
                        std::to_string(n));
    const double fps = trajectory.frame_rate_hz;
    std::vector<double> speeds(n);
    auto pos = [&](std::size_t f) {
        return horizontal(trajectory.frames[f].joints[joint_index]);
    };
    speeds[0] = (pos(1) - pos(0)).norm() * fps;
    for (std::size_t i = 1; i + 1 < n; ++i)
        speeds[i] = (pos(i + 1) - pos(i - 1)).norm() * fps / 2.0;
    speeds[n - 1] = (pos(n - 1) - pos(n - 2)).norm() * fps;
    return speeds;
}

Vec2 longitudinal_axis(const Trajectory& trajectory, const Skeleton& skeleton) {
    int sacrum = required_joint(skeleton, "sacrum");
    Vec2 displacement = horizontal(trajectory.frames.back().joints[sacrum]) -
                        horizontal(trajectory.frames.front().joints[sacrum]);
    if (displacement.norm() < 1e-9) return Vec2(1.0, 0.0);
    return displacement.normalized();
}

FootEvents detect_foot_events(const Trajectory& trajectory, const Skeleton& skeleton,
                              double velocity_threshold) {
    if (!(velocity_threshold > 0.0))
        throw ConfigError("gait: velocity threshold must be positive");
    FootEvents events;
    events.left = stance_runs(
        horizontal_speeds(trajectory, required_joint(skeleton, "l_ankle")),
        velocity_threshold);
    events.right = stance_runs(
        horizontal_speeds(trajectory, required_joint(skeleton, "r_ankle")),
        velocity_threshold);
    return events;
}

GaitReport compute_gait_report(const Trajectory& trajectory, const Skeleton& skeleton,
                               const FootEvents& events) {
    const std::size_t n = trajectory.frames.size();
    if (n < 2) throw GaitError("gait: trajectory too short");
    if (events.left.size() + events.right.size() < 2)
        throw GaitError("gait: fewer than two stance intervals detected");
    const double dt = trajectory.frame_period_s();
    const Vec2 axis = longitudinal_axis(trajectory, skeleton);
    const Vec2 lateral(-axis.y(), axis.x());

    const int l_ankle = required_joint(skeleton, "l_ankle");
    const int r_ankle = required_joint(skeleton, "r_ankle");
    std::vector<Placement> placements;
    for (const StanceInterval& s : events.left)
        placements.push_back({0, s.begin, mean_ankle_position(trajectory, l_ankle, s)});
    for (const StanceInterval& s : events.right)
        placements.push_back({1, s.begin, mean_ankle_position(trajectory, r_ankle, s)});
    std::sort(placements.begin(), placements.end(),
              [](const Placement& a, const Placement& b) {
                  return a.begin_frame != b.begin_frame ? a.begin_frame < b.begin_frame
                                                        : a.foot < b.foot;
              });

    GaitReport report;

    // Steps: consecutive placements of opposite feet.
    double step_sum = 0.0;
    int step_count = 0;
    double width_sum = 0.0;
    for (std::size_t i = 0; i + 1 < placements.size(); ++i) {
        const Placement& a = placements[i];
        const Placement& b = placements[i + 1];
        if (a.foot == b.foot || b.begin_frame <= a.begin_frame) continue;
        step_sum += (b.position - a.position).dot(axis);
        width_sum += std::abs((b.position - a.position).dot(lateral));
        ++step_count;
    }
    if (step_count == 0)
        throw GaitError(
            "gait: step length cannot be computed: no alternating foot placements");
    report.step_length_m = step_sum / step_count;
    report.stride_width_m = width_sum / step_count;

    // Strides: consecutive placements of the same foot.
    double stride_sum = 0.0;
    int stride_count = 0;
    for (const std::vector<StanceInterval>* foot : {&events.left, &events.right}) {
        const int ankle = foot == &events.left ? l_ankle : r_ankle;
        for (std::size_t i = 0; i + 1 < foot->size(); ++i) {
            Vec2 a = mean_ankle_position(trajectory, ankle, (*foot)[i]);
            Vec2 b = mean_ankle_position(trajectory, ankle, (*foot)[i + 1]);
            stride_sum += (b - a).dot(axis);
            ++stride_count;
        }
    }
    if (stride_count == 0)
        throw GaitError(
            "gait: stride length cannot be computed: no repeated same-foot placements");
    report.stride_length_m = stride_sum / stride_count;

    // Support phases from the per-frame stance picture.
    std::vector<char> both(n, 0), left_only(n, 0), right_only(n, 0);
    for (std::size_t f = 0; f < n; ++f) {
        bool l = in_stance(events.left, static_cast<int>(f));
        bool r = in_stance(events.right, static_cast<int>(f));
        both[f] = l && r;
        left_only[f] = l && !r;
        right_only[f] = r && !l;
    }
    // A phase that never occurs contributes zero time, not an error: a gait
    // with no both-feet overlap simply has no double support.
    report.double_support_s = mean_run_duration(both, dt);
    report.single_support_left_s = mean_run_duration(left_only, dt);
    report.single_support_right_s = mean_run_duration(right_only, dt);

    // Cadence from stance-begin spacing across both feet.
    std::vector<int> strikes;
    for (const StanceInterval& s : events.left) strikes.push_back(s.begin);
    for (const StanceInterval& s : events.right) strikes.push_back(s.begin);
    std::sort(strikes.begin(), strikes.end());
    if (strikes.size() < 2 || strikes.back() == strikes.front())
        throw GaitError("gait: cadence cannot be computed: fewer than two distinct strikes");
    report.cadence_steps_min = 60.0 * static_cast<double>(strikes.size() - 1) /
                               ((strikes.back() - strikes.front()) * dt);

    int sacrum = required_joint(skeleton, "sacrum");
    Vec2 travel = horizontal(trajectory.frames.back().joints[sacrum]) -
                  horizontal(trajectory.frames.front().joints[sacrum]);
    report.speed_m_s = travel.norm() / (static_cast<double>(n - 1) * dt);

    report.hip_range_left_deg = angle_range_deg(trajectory, required_dof(skeleton, "l_hip_flex"));
    report.hip_range_right_deg = angle_range_deg(trajectory, required_dof(skeleton, "r_hip_flex"));
    report.knee_range_left_deg = angle_range_deg(trajectory, required_dof(skeleton, "l_knee_flex"));
    report.knee_range_right_deg = angle_range_deg(trajectory, required_dof(skeleton, "r_knee_flex"));
    return report;
}

}  // namespace mocap
