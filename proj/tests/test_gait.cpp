#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "mocap/gait.hpp"
#include "mocap/kinematics.hpp"

using namespace mocap;

namespace {

TrajectoryFrame zero_frame() {
    TrajectoryFrame frame;
    for (int j = 0; j < kNumJoints; ++j) frame.joints[j] = Vec3::Zero();
    return frame;
}

/// Trajectory whose only moving parts are the two ankles and the sacrum,
/// placed directly (no kinematics involved).
struct TrackBuilder {
    Skeleton skeleton = Skeleton::default_skeleton();
    int sacrum = skeleton.joint_index("sacrum");
    int l_ankle = skeleton.joint_index("l_ankle");
    int r_ankle = skeleton.joint_index("r_ankle");

    Trajectory make(double fps, const std::vector<double>& left_x,
                    const std::vector<double>& right_x,
                    const std::vector<double>& sacrum_x) const {
        Trajectory t;
        t.frame_rate_hz = fps;
        for (std::size_t f = 0; f < left_x.size(); ++f) {
            TrajectoryFrame frame = zero_frame();
            frame.joints[l_ankle] = Vec3(left_x[f], 0.05, 0.0);
            frame.joints[r_ankle] = Vec3(right_x[f], -0.05, 0.0);
            frame.joints[sacrum] = Vec3(sacrum_x[f], 0.0, 0.9);
            t.frames.push_back(frame);
        }
        return t;
    }
};

/// 34-frame walk at 2 Hz: each ankle alternates constant holds with
/// 0.2 m/frame advances, phased so stances overlap by exactly two frames.
/// Holds (frames = value): left [0,6]=0, [9,18]=0.6, [21,30]=1.2;
/// right [3,12]=0.3, [15,24]=0.9, [27,33]=1.5; ramps fill the gaps.
Trajectory walking_trajectory(const TrackBuilder& builder) {
    const int n = 34;
    auto series = [n](const std::vector<std::pair<int, int>>& holds,
                      double first_value, double before_first) {
        std::vector<double> xs(static_cast<std::size_t>(n), before_first);
        double value = first_value;
        for (std::size_t h = 0; h < holds.size(); ++h) {
            for (int f = holds[h].first; f <= holds[h].second; ++f)
                xs[static_cast<std::size_t>(f)] = value;
            const int ramp_from = holds[h].second;  // 0.2 per frame after a hold
            const int ramp_to = h + 1 < holds.size() ? holds[h + 1].first : n;
            for (int f = ramp_from + 1; f < ramp_to; ++f)
                xs[static_cast<std::size_t>(f)] = value + 0.2 * (f - ramp_from);
            value += 0.6;
        }
        return xs;
    };
    std::vector<double> left = series({{0, 6}, {9, 18}, {21, 30}}, 0.0, 0.0);
    // right walks in: -0.3, -0.1, 0.1 before its first hold
    std::vector<double> right = series({{3, 12}, {15, 24}, {27, 33}}, 0.3, 0.0);
    for (int f = 0; f < 3; ++f) right[static_cast<std::size_t>(f)] = -0.3 + 0.2 * f;
    std::vector<double> sacrum(n);
    for (int f = 0; f < n; ++f) sacrum[static_cast<std::size_t>(f)] = 0.05 * f;

    Trajectory t = builder.make(2.0, left, right, sacrum);
    for (int f = 0; f < n; ++f) {
        PoseVector& pose = t.frames[static_cast<std::size_t>(f)].pose;
        pose[builder.skeleton.dof_index("l_hip_flex")] = deg_to_rad(25.0 * f / 33.0);
        pose[builder.skeleton.dof_index("r_hip_flex")] = deg_to_rad(f % 2 ? -20.0 : 0.0);
        pose[builder.skeleton.dof_index("l_knee_flex")] = deg_to_rad(f % 2 ? 30.0 : 0.0);
        pose[builder.skeleton.dof_index("r_knee_flex")] = deg_to_rad(5.0);
    }
    return t;
}

}  // namespace

TEST_CASE("horizontal speeds use central differences with one-sided ends") {
    TrackBuilder b;
    std::vector<double> xs{0.0, 1.0, 4.0, 9.0};
    Trajectory t = b.make(2.0, xs, xs, xs);
    std::vector<double> speeds = horizontal_speeds(t, b.l_ankle);
    REQUIRE(speeds.size() == 4);
    CHECK(speeds[0] == doctest::Approx(2.0));   // |1-0| * 2
    CHECK(speeds[1] == doctest::Approx(4.0));   // |4-0| * 2 / 2
    CHECK(speeds[2] == doctest::Approx(8.0));   // |9-1| * 2 / 2
    CHECK(speeds[3] == doctest::Approx(10.0));  // |9-4| * 2
}

TEST_CASE("speed estimation needs at least three frames") {
    TrackBuilder b;
    std::vector<double> xs{0.0, 1.0};
    Trajectory t = b.make(2.0, xs, xs, xs);
    CHECK_THROWS_AS(horizontal_speeds(t, b.l_ankle), GaitError);
}

TEST_CASE("stationary ankles give one full-span stance interval per foot") {
    TrackBuilder b;
    std::vector<double> xs(5, 0.7);
    Trajectory t = b.make(20.0, xs, xs, xs);
    FootEvents events = detect_foot_events(t, b.skeleton, 0.1);
    REQUIRE(events.left.size() == 1);
    REQUIRE(events.right.size() == 1);
    CHECK(events.left[0].begin == 0);
    CHECK(events.left[0].end == 4);
    CHECK(events.right[0].begin == 0);
    CHECK(events.right[0].end == 4);
}

TEST_CASE("constant fast motion yields no stance intervals") {
    TrackBuilder b;
    std::vector<double> xs;
    for (int f = 0; f < 10; ++f) xs.push_back(0.2 * f);
    Trajectory t = b.make(20.0, xs, xs, xs);
    FootEvents events = detect_foot_events(t, b.skeleton, 0.1);
    CHECK(events.left.empty());
    CHECK(events.right.empty());
}

TEST_CASE("plateau-ramp signals produce stance exactly on the plateaus") {
    // 10-frame plateaus and ramps at 20 Hz; central differencing eats one
    // frame at every hold edge that is not a trajectory boundary.
    TrackBuilder b;
    std::vector<double> xs;
    for (int f = 0; f < 40; ++f) {
        if (f <= 9)
            xs.push_back(0.0);
        else if (f <= 19)
            xs.push_back(0.1 * (f - 9));
        else if (f <= 29)
            xs.push_back(1.0);
        else
            xs.push_back(1.0 + 0.1 * (f - 29));
    }
    Trajectory t = b.make(20.0, xs, xs, xs);
    FootEvents events = detect_foot_events(t, b.skeleton, 0.1);
    REQUIRE(events.left.size() == 2);
    CHECK(events.left[0].begin == 0);
    CHECK(events.left[0].end == 8);
    CHECK(events.left[1].begin == 20);
    CHECK(events.left[1].end == 28);
}

TEST_CASE("single-frame stance runs are discarded as jitter") {
    TrackBuilder b;
    // Fast motion except one isolated slow frame at f=3.
    std::vector<double> xs{0.0, 0.3, 0.6, 0.75, 0.9, 1.2, 1.5};
    Trajectory t = b.make(2.0, xs, xs, xs);
    // f=3 central: |0.9-0.6| * 1 = 0.3; choose threshold between that and
    // the 0.6 of its neighbours so exactly one frame qualifies.
    FootEvents events = detect_foot_events(t, b.skeleton, 0.4);
    CHECK(events.left.empty());
}

TEST_CASE("threshold must be positive") {
    TrackBuilder b;
    std::vector<double> xs(5, 0.0);
    Trajectory t = b.make(2.0, xs, xs, xs);
    CHECK_THROWS_AS(detect_foot_events(t, b.skeleton, 0.0), ConfigError);
    CHECK_THROWS_AS(detect_foot_events(t, b.skeleton, -0.1), ConfigError);
}

TEST_CASE("walking schedule: detected events match the hand-derived picture") {
    TrackBuilder b;
    Trajectory t = walking_trajectory(b);
    FootEvents events = detect_foot_events(t, b.skeleton, 0.1);

    REQUIRE(events.left.size() == 3);
    CHECK(events.left[0].begin == 0);
    CHECK(events.left[0].end == 5);
    CHECK(events.left[1].begin == 10);
    CHECK(events.left[1].end == 17);
    CHECK(events.left[2].begin == 22);
    CHECK(events.left[2].end == 29);

    REQUIRE(events.right.size() == 3);
    CHECK(events.right[0].begin == 4);
    CHECK(events.right[0].end == 11);
    CHECK(events.right[1].begin == 16);
    CHECK(events.right[1].end == 23);
    CHECK(events.right[2].begin == 28);
    CHECK(events.right[2].end == 33);

    // Per-foot interval lists are sorted and disjoint.
    for (const auto* foot : {&events.left, &events.right}) {
        for (std::size_t i = 0; i < foot->size(); ++i) {
            CHECK((*foot)[i].begin <= (*foot)[i].end);
            if (i > 0) CHECK((*foot)[i - 1].end < (*foot)[i].begin);
        }
    }
}

TEST_CASE("walking schedule: every report quantity matches hand arithmetic") {
    TrackBuilder b;
    Trajectory t = walking_trajectory(b);
    FootEvents events = detect_foot_events(t, b.skeleton, 0.1);
    GaitReport report = compute_gait_report(t, b.skeleton, events);

    // Placements advance 0.3 m per alternating step, 0.6 m per stride.
    CHECK(report.step_length_m == doctest::Approx(0.3).epsilon(1e-9));
    CHECK(report.stride_length_m == doctest::Approx(0.6).epsilon(1e-9));
    CHECK(report.stride_length_m ==
          doctest::Approx(2.0 * report.step_length_m).epsilon(1e-6));
    CHECK(report.stride_width_m == doctest::Approx(0.1).epsilon(1e-9));

    // Stances overlap 2 frames; single-support runs are 4 frames; dt = 0.5 s.
    CHECK(report.double_support_s == 1.0);
    CHECK(report.single_support_left_s == 2.0);
    CHECK(report.single_support_right_s == 2.0);

    // Strikes at frames 0,4,10,16,22,28: five steps over 14 seconds.
    CHECK(report.cadence_steps_min == doctest::Approx(60.0 * 5.0 / 14.0));

    // Sacrum advances 0.05 m/frame at 2 Hz.
    CHECK(report.speed_m_s == doctest::Approx(0.1));

    CHECK(report.hip_range_left_deg == doctest::Approx(25.0));
    CHECK(report.hip_range_right_deg == doctest::Approx(20.0));
    CHECK(report.knee_range_left_deg == doctest::Approx(30.0));
    CHECK(report.knee_range_right_deg == doctest::Approx(0.0));
}

TEST_CASE("support times are whole multiples of the frame period") {
    TrackBuilder b;
    Trajectory t = walking_trajectory(b);
    GaitReport report =
        compute_gait_report(t, b.skeleton, detect_foot_events(t, b.skeleton, 0.1));
    const double dt = t.frame_period_s();
    for (double value : {report.double_support_s, report.single_support_left_s,
                         report.single_support_right_s}) {
        const double in_frames = value / dt;
        CHECK(in_frames == doctest::Approx(std::round(in_frames)).epsilon(1e-12));
    }
}

TEST_CASE("a gait with airborne phases reports zero double support") {
    // Running-style schedule at 2 Hz: stances never overlap, every quantity
    // below follows from the hold windows by hand.
    // Detected stances: left [0,2] at 0.0 and [10,12] at 1.2;
    // right [6,7] at 0.6 and [15,17] at 1.8.
    TrackBuilder b;
    std::vector<double> left{0.0, 0.0, 0.0, 0.0, 0.2, 0.4, 0.6, 0.8, 1.0, 1.2,
                             1.2, 1.2, 1.2, 1.2, 1.4, 1.6, 1.8, 2.0, 2.2, 2.4};
    std::vector<double> right{-0.4, -0.2, 0.0, 0.2, 0.4, 0.6, 0.6, 0.6, 0.6, 0.8,
                              1.0,  1.2,  1.4, 1.6, 1.8, 1.8, 1.8, 1.8, 1.8, 2.0};
    std::vector<double> sacrum;
    for (int f = 0; f < 20; ++f) sacrum.push_back(0.12 * f);
    Trajectory t = b.make(2.0, left, right, sacrum);

    FootEvents events = detect_foot_events(t, b.skeleton, 0.1);
    REQUIRE(events.left.size() == 2);
    REQUIRE(events.right.size() == 2);
    GaitReport report = compute_gait_report(t, b.skeleton, events);

    CHECK(report.double_support_s == 0.0);
    CHECK(report.single_support_left_s == 1.5);   // two 3-frame runs at 0.5 s
    CHECK(report.single_support_right_s == 1.25);  // a 2-frame and a 3-frame run
    CHECK(report.step_length_m == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(report.stride_length_m == doctest::Approx(1.2).epsilon(1e-12));
    CHECK(report.cadence_steps_min == 24.0);  // 3 strikes over 7.5 s
}

TEST_CASE("relabeling the clock scales times but not lengths") {
    TrackBuilder b;
    Trajectory fast = walking_trajectory(b);
    Trajectory slow = fast;
    slow.frame_rate_hz = 1.0;  // same poses, twice the frame period

    FootEvents ef = detect_foot_events(fast, b.skeleton, 0.1);
    FootEvents es = detect_foot_events(slow, b.skeleton, 0.05);
    REQUIRE(ef.left.size() == es.left.size());
    REQUIRE(ef.right.size() == es.right.size());
    for (std::size_t i = 0; i < ef.left.size(); ++i) {
        CHECK(ef.left[i].begin == es.left[i].begin);
        CHECK(ef.left[i].end == es.left[i].end);
    }

    GaitReport rf = compute_gait_report(fast, b.skeleton, ef);
    GaitReport rs = compute_gait_report(slow, b.skeleton, es);
    CHECK(rs.step_length_m == doctest::Approx(rf.step_length_m).epsilon(1e-12));
    CHECK(rs.stride_length_m == doctest::Approx(rf.stride_length_m).epsilon(1e-12));
    CHECK(rs.stride_width_m == doctest::Approx(rf.stride_width_m).epsilon(1e-12));
    CHECK(rs.speed_m_s == doctest::Approx(rf.speed_m_s / 2.0));
    CHECK(rs.cadence_steps_min == doctest::Approx(rf.cadence_steps_min / 2.0));
    CHECK(rs.double_support_s == doctest::Approx(rf.double_support_s * 2.0));
    CHECK(rs.single_support_left_s == doctest::Approx(rf.single_support_left_s * 2.0));
    CHECK(rs.single_support_right_s ==
          doctest::Approx(rf.single_support_right_s * 2.0));
}

TEST_CASE("the report is invariant under rigid horizontal motion") {
    TrackBuilder b;
    Trajectory t = walking_trajectory(b);
    GaitReport base =
        compute_gait_report(t, b.skeleton, detect_foot_events(t, b.skeleton, 0.1));

    const double angle = deg_to_rad(37.0);
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    Trajectory moved = t;
    for (TrajectoryFrame& frame : moved.frames) {
        for (int j = 0; j < kNumJoints; ++j) {
            const Vec3 p = frame.joints[j];
            frame.joints[j] =
                Vec3(c * p.x() - s * p.y() + 2.4, s * p.x() + c * p.y() + 7.7, p.z());
        }
    }
    GaitReport turned = compute_gait_report(
        moved, b.skeleton, detect_foot_events(moved, b.skeleton, 0.1));

    CHECK(turned.step_length_m == doctest::Approx(base.step_length_m).epsilon(1e-9));
    CHECK(turned.stride_length_m == doctest::Approx(base.stride_length_m).epsilon(1e-9));
    CHECK(turned.stride_width_m == doctest::Approx(base.stride_width_m).epsilon(1e-9));
    CHECK(turned.speed_m_s == doctest::Approx(base.speed_m_s).epsilon(1e-9));
    CHECK(turned.cadence_steps_min ==
          doctest::Approx(base.cadence_steps_min).epsilon(1e-9));
    CHECK(turned.double_support_s == base.double_support_s);
    CHECK(turned.single_support_left_s == base.single_support_left_s);
    CHECK(turned.single_support_right_s == base.single_support_right_s);
    CHECK(turned.hip_range_left_deg == base.hip_range_left_deg);
    CHECK(turned.knee_range_right_deg == base.knee_range_right_deg);
}

TEST_CASE("stance positions are interval means, not first-frame samples") {
    TrackBuilder b;
    // Left foot jitters around 0 within threshold over [0,5], strides to a
    // clean hold at 0.6; right holds 0.3 in between. Mean of the jittering
    // stance is 0.0016, which must show up in the step lengths.
    std::vector<double> left{0.0, 0.004, 0.0, 0.004, 0.0, 0.004,
                             0.2, 0.4, 0.6, 0.6, 0.6, 0.6, 0.6, 0.6};
    std::vector<double> right{-0.3, -0.1, 0.1, 0.3, 0.3, 0.3, 0.3,
                              0.3, 0.3, 0.3, 0.3, 0.5, 0.7, 0.9};
    std::vector<double> sacrum;
    for (int f = 0; f < 14; ++f) sacrum.push_back(0.05 * f);
    Trajectory t = b.make(2.0, left, right, sacrum);

    FootEvents events = detect_foot_events(t, b.skeleton, 0.1);
    REQUIRE(events.left.size() == 2);
    CHECK(events.left[0].begin == 0);
    CHECK(events.left[0].end == 4);
    CHECK(events.left[1].begin == 9);
    CHECK(events.left[1].end == 13);
    REQUIRE(events.right.size() == 1);
    CHECK(events.right[0].begin == 4);
    CHECK(events.right[0].end == 9);

    GaitReport report = compute_gait_report(t, b.skeleton, events);
    // Steps: (0.3 - 0.0016) and (0.6 - 0.3); stride: (0.6 - 0.0016).
    CHECK(report.step_length_m == doctest::Approx(0.2992).epsilon(1e-9));
    CHECK(report.stride_length_m == doctest::Approx(0.5984).epsilon(1e-9));
    CHECK(report.stride_length_m ==
          doctest::Approx(2.0 * report.step_length_m).epsilon(1e-6));
}

TEST_CASE("a stationary subject cannot produce step lengths") {
    TrackBuilder b;
    std::vector<double> xs(10, 0.4);
    Trajectory t = b.make(20.0, xs, xs, xs);
    FootEvents events = detect_foot_events(t, b.skeleton, 0.1);
    try {
        compute_gait_report(t, b.skeleton, events);
        FAIL("expected a gait error");
    } catch (const GaitError& e) {
        CHECK(std::string(e.what()).find("step") != std::string::npos);
    }
}

TEST_CASE("too few stance intervals fail up front") {
    TrackBuilder b;
    std::vector<double> xs(6, 0.0);
    Trajectory t = b.make(2.0, xs, xs, xs);
    FootEvents one;
    one.left.push_back({0, 5});
    CHECK_THROWS_AS(compute_gait_report(t, b.skeleton, one), GaitError);
}

TEST_CASE("longitudinal axis follows sacrum travel with an idle fallback") {
    TrackBuilder b;
    std::vector<double> xs(5, 0.0);
    std::vector<double> sacrum{0.0, 0.1, 0.2, 0.3, 0.4};
    Trajectory t = b.make(2.0, xs, xs, sacrum);
    Vec2 axis = longitudinal_axis(t, b.skeleton);
    CHECK(axis.x() == doctest::Approx(1.0));
    CHECK(axis.y() == doctest::Approx(0.0).epsilon(1e-12));

    Trajectory still = b.make(2.0, xs, xs, std::vector<double>(5, 0.0));
    Vec2 fallback = longitudinal_axis(still, b.skeleton);
    CHECK(fallback.x() == 1.0);
    CHECK(fallback.y() == 0.0);
}
