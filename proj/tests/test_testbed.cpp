#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "mocap/errors.hpp"
#include "mocap/kinematics.hpp"
#include "mocap/synth.hpp"
#include "oracles.hpp"

using namespace mocap;

namespace {

struct Body {
    Skeleton skeleton = Skeleton::default_skeleton();
    FleshModel flesh = FleshModel::default_flesh();
};

/// Small side-on camera framing the whole default 40-frame walk; cheaper to
/// render than the built-in 320x240 default.
Camera small_walk_camera() {
    return Camera::look_at(120, 90, 100.0, Vec3(0.66, -4.0, 1.0), Vec3(0.66, 0.0, 1.0));
}

Trajectory random_trajectory(std::mt19937_64& rng, std::size_t frame_count) {
    std::uniform_real_distribution<double> coord(-1.0, 1.0);
    Trajectory out;
    for (std::size_t f = 0; f < frame_count; ++f) {
        TrajectoryFrame frame;
        frame.weight = 1.0;
        for (int j = 0; j < kNumJoints; ++j)
            frame.joints[j] = Vec3(coord(rng), coord(rng), coord(rng));
        out.frames.push_back(frame);
    }
    return out;
}

}  // namespace

TEST_CASE("zero cadence or zero step length degenerates to standing") {
    Body body;
    WalkScenario still;
    still.cadence_steps_min = 0.0;
    still.heading_deg = 45.0;

    WalkScenario no_step;
    no_step.step_length_m = 0.0;
    no_step.heading_deg = 45.0;

    const PoseVector standing = standing_pose(body.skeleton);
    const int rz = body.skeleton.dof_index("root_rz");
    for (double t : {0.0, 0.7, 3.9}) {
        for (const WalkScenario* s : {&still, &no_step}) {
            PoseVector pose = walk_pose(*s, body.skeleton, t);
            for (int d = 0; d < kNumDofs; ++d) {
                if (d == rz)
                    CHECK(pose[d] == deg_to_rad(45.0));
                else
                    CHECK(pose[d] == standing[d]);
            }
        }
    }
}

TEST_CASE("root advances along the heading at the scenario speed") {
    Body body;
    WalkScenario s;
    s.heading_deg = 90.0;

    const double t = 2.0;
    PoseVector pose = walk_pose(s, body.skeleton, t);
    CHECK(pose[body.skeleton.dof_index("root_ty")] ==
          doctest::Approx(s.speed_m_s() * t).epsilon(1e-12));
    CHECK(std::abs(pose[body.skeleton.dof_index("root_tx")]) < 1e-14);
    CHECK(pose[body.skeleton.dof_index("root_rz")] == deg_to_rad(90.0));
}

TEST_CASE("gait program is antisymmetric and shifts by one step period") {
    Body body;
    WalkScenario s;
    const int l_hip = body.skeleton.dof_index("l_hip_flex");
    const int r_hip = body.skeleton.dof_index("r_hip_flex");
    const int l_knee = body.skeleton.dof_index("l_knee_flex");
    const int r_knee = body.skeleton.dof_index("r_knee_flex");
    const double step_period = 60.0 / s.cadence_steps_min;
    const double knee_lift = deg_to_rad(s.knee_lift_deg);

    for (double t : {0.05, 0.31, 0.92, 1.48}) {
        PoseVector now = walk_pose(s, body.skeleton, t);
        PoseVector later = walk_pose(s, body.skeleton, t + step_period);
        // Legs are half a stride out of phase with each other.
        CHECK(now[l_hip] == doctest::Approx(-now[r_hip]).epsilon(1e-12));
        CHECK(later[r_hip] == doctest::Approx(now[l_hip]).epsilon(1e-9));
        CHECK(later[r_knee] == doctest::Approx(now[l_knee]).epsilon(1e-9));
        CHECK(now[l_knee] >= 0.0);
        CHECK(now[r_knee] >= 0.0);
        CHECK(now[l_knee] <= knee_lift);
        CHECK(now[r_knee] <= knee_lift);
    }
}

TEST_CASE("generated sequence carries exact ground truth") {
    Body body;
    WalkScenario s;
    s.frame_count = 6;
    s.camera = small_walk_camera();
    SyntheticWalk walk = generate_walk(s, body.skeleton, body.flesh);

    CHECK(walk.frames.size() == 6);
    CHECK(walk.clean_silhouettes.size() == 6);
    CHECK(walk.truth.frames.size() == 6);
    CHECK(walk.truth.frame_rate_hz == s.frame_rate_hz);
    CHECK(walk.background.width == 120);
    CHECK(walk.background.height == 90);
    CHECK(std::all_of(walk.background.pixels.begin(), walk.background.pixels.end(),
                      [&](std::uint8_t px) { return px == s.background_level; }));

    for (int f = 0; f < 6; ++f) {
        const TrajectoryFrame& truth = walk.truth.frames[static_cast<std::size_t>(f)];
        PoseVector expected = walk_pose(s, body.skeleton, f / s.frame_rate_hz);
        CHECK(truth.pose == expected);
        CHECK(truth.weight == 1.0);
        JointPositions joints = forward_kinematics(body.skeleton, expected);
        for (int j = 0; j < kNumJoints; ++j) CHECK(truth.joints[j] == joints[j]);
    }
}

TEST_CASE("noise-free frames reduce back to the clean silhouettes") {
    Body body;
    WalkScenario s;
    s.frame_count = 6;
    s.camera = small_walk_camera();
    SyntheticWalk walk = generate_walk(s, body.skeleton, body.flesh);

    for (int f = 0; f < s.frame_count; ++f) {
        const GrayFrame& frame = walk.frames[static_cast<std::size_t>(f)];
        const SilhouetteImage& clean = walk.clean_silhouettes[static_cast<std::size_t>(f)];
        CHECK(clean.count_foreground() > 0);
        for (std::size_t i = 0; i < frame.pixels.size(); ++i) {
            const std::uint8_t expected =
                clean.mask[i] ? s.foreground_level : s.background_level;
            REQUIRE(frame.pixels[i] == expected);
        }
        CHECK(extract_silhouette(frame, walk.background, 30) == clean);
    }
}

TEST_CASE("same seed reproduces frames bitwise, different seed does not") {
    Body body;
    WalkScenario s;
    s.frame_count = 5;
    s.camera = small_walk_camera();
    s.pixel_noise_rate = 0.1;
    s.seed = 7;

    SyntheticWalk a = generate_walk(s, body.skeleton, body.flesh);
    SyntheticWalk b = generate_walk(s, body.skeleton, body.flesh);
    for (int f = 0; f < s.frame_count; ++f)
        CHECK(a.frames[static_cast<std::size_t>(f)].pixels ==
              b.frames[static_cast<std::size_t>(f)].pixels);

    s.seed = 8;
    SyntheticWalk c = generate_walk(s, body.skeleton, body.flesh);
    bool any_difference = false;
    for (int f = 0; f < s.frame_count; ++f)
        if (c.frames[static_cast<std::size_t>(f)].pixels !=
            a.frames[static_cast<std::size_t>(f)].pixels)
            any_difference = true;
    CHECK(any_difference);

    // The seed only feeds the pixel noise, so without noise it is inert.
    s.pixel_noise_rate = 0.0;
    s.seed = 7;
    SyntheticWalk clean_a = generate_walk(s, body.skeleton, body.flesh);
    s.seed = 8;
    SyntheticWalk clean_b = generate_walk(s, body.skeleton, body.flesh);
    for (int f = 0; f < s.frame_count; ++f)
        CHECK(clean_a.frames[static_cast<std::size_t>(f)].pixels ==
              clean_b.frames[static_cast<std::size_t>(f)].pixels);
}

TEST_CASE("pixel noise flips a binomially plausible number of pixels") {
    Body body;
    WalkScenario s;
    s.frame_count = 6;
    s.camera = small_walk_camera();
    s.pixel_noise_rate = 0.1;
    s.seed = 41;
    SyntheticWalk walk = generate_walk(s, body.skeleton, body.flesh);

    const double n = 120.0 * 90.0;
    const double mean = n * s.pixel_noise_rate;
    const double sd = std::sqrt(n * s.pixel_noise_rate * (1.0 - s.pixel_noise_rate));
    for (int f = 0; f < s.frame_count; ++f) {
        const GrayFrame& noisy = walk.frames[static_cast<std::size_t>(f)];
        const SilhouetteImage& clean = walk.clean_silhouettes[static_cast<std::size_t>(f)];
        std::size_t flipped = 0;
        for (std::size_t i = 0; i < noisy.pixels.size(); ++i) {
            const std::uint8_t expected =
                clean.mask[i] ? s.foreground_level : s.background_level;
            if (noisy.pixels[i] != expected) ++flipped;
            // A flip swaps the two levels, it never invents a third value.
            REQUIRE((noisy.pixels[i] == s.background_level ||
                     noisy.pixels[i] == s.foreground_level));
        }
        CHECK(static_cast<double>(flipped) > mean - 6.0 * sd);
        CHECK(static_cast<double>(flipped) < mean + 6.0 * sd);
    }
}

TEST_CASE("stance ankle is momentarily stationary, swing ankle is fast") {
    Body body;
    WalkScenario s;
    s.step_length_m = 0.6;
    s.cadence_steps_min = 100.0;  // 1 m/s, stride period 1.2 s

    const double fps = 100.0;
    const int frames = 121;  // one full stride
    const int l_ankle = body.skeleton.joint_index("l_ankle");
    const int r_ankle = body.skeleton.joint_index("r_ankle");

    std::vector<Vec3> left(frames), right(frames);
    for (int f = 0; f < frames; ++f) {
        JointPositions joints =
            forward_kinematics(body.skeleton, walk_pose(s, body.skeleton, f / fps));
        left[static_cast<std::size_t>(f)] = joints[l_ankle];
        right[static_cast<std::size_t>(f)] = joints[r_ankle];
    }

    for (const std::vector<Vec3>* track : {&left, &right}) {
        double slowest = 1e9;
        double fastest = 0.0;
        for (int f = 1; f < frames - 1; ++f) {
            const double speed = ((*track)[static_cast<std::size_t>(f + 1)] -
                                  (*track)[static_cast<std::size_t>(f - 1)])
                                     .norm() *
                                 fps / 2.0;
            slowest = std::min(slowest, speed);
            fastest = std::max(fastest, speed);
        }
        CHECK(slowest < 0.05);
        CHECK(fastest > 1.3);
    }
}

TEST_CASE("evaluate reports zero error for identical trajectories") {
    std::mt19937_64 rng(11);
    Trajectory t = random_trajectory(rng, 5);
    EvalReport report = evaluate(t, t);
    for (int j = 0; j < kNumJoints; ++j) {
        CHECK(report.rmse_m[static_cast<std::size_t>(j)] == 0.0);
        CHECK(report.max_error_m[static_cast<std::size_t>(j)] == 0.0);
    }
    CHECK(report.mean_rmse_m == 0.0);
}

TEST_CASE("evaluate reports a uniform offset exactly") {
    std::mt19937_64 rng(12);
    Trajectory truth = random_trajectory(rng, 4);
    Trajectory shifted = truth;
    for (TrajectoryFrame& frame : shifted.frames)
        for (int j = 0; j < kNumJoints; ++j) frame.joints[j] += Vec3(0.01, 0.0, 0.0);

    EvalReport report = evaluate(shifted, truth);
    for (int j = 0; j < kNumJoints; ++j) {
        CHECK(report.rmse_m[static_cast<std::size_t>(j)] ==
              doctest::Approx(0.01).epsilon(1e-12));
        CHECK(report.max_error_m[static_cast<std::size_t>(j)] ==
              doctest::Approx(0.01).epsilon(1e-12));
    }
    CHECK(report.mean_rmse_m == doctest::Approx(0.01).epsilon(1e-12));
}

TEST_CASE("evaluate matches the per-joint reference on random trajectories") {
    std::mt19937_64 rng(13);
    Trajectory estimated = random_trajectory(rng, 7);
    Trajectory truth = random_trajectory(rng, 7);
    EvalReport report = evaluate(estimated, truth);

    double mean = 0.0;
    for (int j = 0; j < kNumJoints; ++j) {
        const double expected = oracles::reference_joint_rmse(estimated, truth, j);
        CHECK(report.rmse_m[static_cast<std::size_t>(j)] ==
              doctest::Approx(expected).epsilon(1e-12));
        mean += report.rmse_m[static_cast<std::size_t>(j)];
    }
    CHECK(report.mean_rmse_m ==
          doctest::Approx(mean / static_cast<double>(kNumJoints)).epsilon(1e-12));
}

TEST_CASE("evaluate rejects mismatched or empty trajectories") {
    std::mt19937_64 rng(14);
    Trajectory three = random_trajectory(rng, 3);
    Trajectory two = random_trajectory(rng, 2);
    CHECK_THROWS_AS(evaluate(three, two), DimensionError);
    CHECK_THROWS_AS(evaluate(Trajectory{}, Trajectory{}), DimensionError);
}

TEST_CASE("default camera keeps the walker in view on every frame") {
    Body body;
    WalkScenario s;  // stock 40-frame walk, built-in side-on camera
    SyntheticWalk walk = generate_walk(s, body.skeleton, body.flesh);

    CHECK(walk.camera.width == 320);
    CHECK(walk.camera.height == 240);
    CHECK(walk.camera.focal_px == 400.0);
    for (const SilhouetteImage& mask : walk.clean_silhouettes)
        CHECK(mask.count_foreground() > 0);
}

TEST_CASE("a camera that never sees the walker is an error") {
    Body body;
    WalkScenario s;
    s.frame_count = 2;
    s.camera = Camera::look_at(64, 48, 60.0, Vec3(0.0, -5.0, 1.0), Vec3(0.0, -10.0, 1.0));
    CHECK_THROWS_AS(generate_walk(s, body.skeleton, body.flesh), Error);
}

TEST_CASE("scenario validation rejects out-of-range parameters") {
    auto broken = [](auto mutate) {
        WalkScenario s;
        mutate(s);
        return s;
    };
    CHECK_THROWS_AS(broken([](WalkScenario& s) { s.body_height_m = 0.0; }).validate(),
                    ConfigError);
    CHECK_THROWS_AS(broken([](WalkScenario& s) { s.step_length_m = -0.1; }).validate(),
                    ConfigError);
    CHECK_THROWS_AS(broken([](WalkScenario& s) { s.cadence_steps_min = -1.0; }).validate(),
                    ConfigError);
    CHECK_THROWS_AS(broken([](WalkScenario& s) { s.frame_rate_hz = 0.0; }).validate(),
                    ConfigError);
    CHECK_THROWS_AS(broken([](WalkScenario& s) { s.frame_count = 0; }).validate(),
                    ConfigError);
    CHECK_THROWS_AS(broken([](WalkScenario& s) { s.pixel_noise_rate = 1.0; }).validate(),
                    ConfigError);
    CHECK_THROWS_AS(broken([](WalkScenario& s) { s.pixel_noise_rate = -0.01; }).validate(),
                    ConfigError);
    CHECK_THROWS_AS(broken([](WalkScenario& s) { s.foreground_level = 50; }).validate(),
                    ConfigError);
    CHECK_THROWS_AS(broken([](WalkScenario& s) { s.knee_lift_deg = -1.0; }).validate(),
                    ConfigError);

    Body body;
    WalkScenario s;
    s.frame_count = 0;  // generate_walk validates before doing any work
    CHECK_THROWS_AS(generate_walk(s, body.skeleton, body.flesh), ConfigError);

    WalkScenario bad_camera;
    bad_camera.camera = small_walk_camera();
    bad_camera.camera->width = 0;  // camera overrides are validated too
    CHECK_THROWS_AS(generate_walk(bad_camera, body.skeleton, body.flesh), ConfigError);
}

TEST_CASE("single-frame scenarios are well formed") {
    Body body;
    WalkScenario s;
    s.frame_count = 1;
    s.camera = small_walk_camera();
    SyntheticWalk walk = generate_walk(s, body.skeleton, body.flesh);
    CHECK(walk.frames.size() == 1);
    CHECK(walk.clean_silhouettes.size() == 1);
    CHECK(walk.truth.frames.size() == 1);
    CHECK(walk.truth.frames[0].pose == walk_pose(s, body.skeleton, 0.0));
}
