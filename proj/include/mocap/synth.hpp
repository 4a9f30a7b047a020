#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mocap/camera.hpp"
#include "mocap/image.hpp"
#include "mocap/skeleton.hpp"
#include "mocap/trajectory.hpp"

namespace mocap {

/// Parameters of a synthetic straight-line walk with known ground truth.
///
/// The walker starts with its root above the origin and advances along
/// `heading_deg` at step_length * cadence / 60 m/s. Hip flexion follows a
/// sine whose amplitude keeps the stance ankle momentarily stationary; knee
/// flexion lifts during swing only. Zero cadence or zero step length
/// degenerates to standing still.
struct WalkScenario {
    double body_height_m = 1.75;
    double step_length_m = 0.45;
    double cadence_steps_min = 90.0;
    double heading_deg = 0.0;
    double frame_rate_hz = 20.0;
    int frame_count = 40;
    /// Camera override; by default an oblique view (15 degrees off side-on,
    /// at least 4.5 m from the walk's midpoint, scaled to frame the path),
    /// 320x240, 400 px focal length.
    std::optional<Camera> camera;
    /// Fraction of pixels whose intensity is flipped per frame, in [0, 1).
    double pixel_noise_rate = 0.0;
    std::uint64_t seed = 0;
    std::uint8_t background_level = 50;
    std::uint8_t foreground_level = 200;
    double knee_lift_deg = 20.0;

    void validate() const;
    double speed_m_s() const { return step_length_m * cadence_steps_min / 60.0; }
};

/// One generated sequence: grayscale frames with their uniform background,
/// the noise-free masks the renderer produced, and the exact poses used.
struct SyntheticWalk {
    Camera camera;
    GrayFrame background;
    std::vector<GrayFrame> frames;
    std::vector<SilhouetteImage> clean_silhouettes;
    Trajectory truth;
};

/// Ground-truth pose at time t; exposed so tests can probe the gait program
/// directly.
PoseVector walk_pose(const WalkScenario& scenario, const Skeleton& skeleton, double t);

/// Renders the scenario. Throws Error if the walker is invisible to the
/// camera on every frame.
SyntheticWalk generate_walk(const WalkScenario& scenario, const Skeleton& skeleton,
                            const FleshModel& flesh);

/// Per-joint position error between two equal-length trajectories.
struct EvalReport {
    std::array<double, kNumJoints> rmse_m{};
    std::array<double, kNumJoints> max_error_m{};
    double mean_rmse_m = 0.0;
};

EvalReport evaluate(const Trajectory& estimated, const Trajectory& truth);

}  // namespace mocap
