#include "mocap/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "mocap/errors.hpp"
#include "mocap/kinematics.hpp"
#include "mocap/render.hpp"

namespace mocap {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double leg_length(const Skeleton& skeleton) {
    int knee = skeleton.joint_index("l_knee");
    int ankle = skeleton.joint_index("l_ankle");
    if (knee < 0 || ankle < 0)
        throw ConfigError("walk: skeleton lacks leg joints");
    return skeleton.joints[static_cast<std::size_t>(knee)].offset.norm() +
           skeleton.joints[static_cast<std::size_t>(ankle)].offset.norm();
}

}  // namespace

void WalkScenario::validate() const {
    if (!(body_height_m > 0.0)) throw ConfigError("walk: body height must be positive");
    if (step_length_m < 0.0) throw ConfigError("walk: step length must be >= 0");
    if (cadence_steps_min < 0.0) throw ConfigError("walk: cadence must be >= 0");
    if (!(frame_rate_hz > 0.0)) throw ConfigError("walk: frame rate must be positive");
    if (frame_count < 1) throw ConfigError("walk: frame count must be >= 1");
    if (pixel_noise_rate < 0.0 || pixel_noise_rate >= 1.0)
        throw ConfigError("walk: pixel noise rate must be in [0, 1)");
    if (background_level == foreground_level)
        throw ConfigError("walk: background and foreground levels must differ");
    if (knee_lift_deg < 0.0) throw ConfigError("walk: knee lift must be >= 0");
}

PoseVector walk_pose(const WalkScenario& scenario, const Skeleton& skeleton, double t) {
    PoseVector pose = standing_pose(skeleton);
    const double heading = deg_to_rad(scenario.heading_deg);
    pose[skeleton.dof_index("root_rz")] = heading;

    const double v = scenario.speed_m_s();
    const double omega = kPi * scenario.cadence_steps_min / 60.0;  // one stride per 2 steps
    if (v <= 0.0 || omega <= 0.0) return pose;

    pose[skeleton.dof_index("root_tx")] += std::cos(heading) * v * t;
    pose[skeleton.dof_index("root_ty")] += std::sin(heading) * v * t;

    // Hip amplitude chosen so the stance ankle's forward motion cancels the
    // root advance at mid-stance: A = v / (leg length * omega).
    const double amplitude = v / (leg_length(skeleton) * omega);
    const double knee_lift = deg_to_rad(scenario.knee_lift_deg);
    const double u_r = omega * t;
    const double u_l = u_r + kPi;
    pose[skeleton.dof_index("r_hip_flex")] = amplitude * std::sin(u_r);
    pose[skeleton.dof_index("l_hip_flex")] = amplitude * std::sin(u_l);
    pose[skeleton.dof_index("r_knee_flex")] = knee_lift * std::max(0.0, std::cos(u_r));
    pose[skeleton.dof_index("l_knee_flex")] = knee_lift * std::max(0.0, std::cos(u_l));
    return pose;
}

SyntheticWalk generate_walk(const WalkScenario& scenario, const Skeleton& skeleton,
                            const FleshModel& flesh) {
    scenario.validate();

    SyntheticWalk out;
    const double fps = scenario.frame_rate_hz;
    if (scenario.camera) {
        out.camera = *scenario.camera;
        out.camera.validate();
    } else {
        const double heading = deg_to_rad(scenario.heading_deg);
        const double duration = (scenario.frame_count - 1) / fps;
        Vec2 direction(std::cos(heading), std::sin(heading));
        const double half_path = scenario.speed_m_s() * duration / 2.0;
        Vec2 mid = direction * half_path;
        Vec2 side(std::sin(heading), -std::cos(heading));  // walker's right
        // Oblique view, not square to the path: seen exactly side-on the two
        // legs differ only by a sub-pixel depth scaling, so their left/right
        // assignment is ambiguous to the silhouette. A slight azimuth
        // projects the pelvis width into the image plane and separates the
        // legs where they cross, while keeping the swing plane and the walk
        // direction close to the sharp image axes; the distance grows with
        // the path so the whole walk stays framed.
        const double azimuth = deg_to_rad(15.0);
        const double distance = std::max(4.5, 3.6 * half_path);
        Vec2 position =
            mid + distance * (std::cos(azimuth) * side + std::sin(azimuth) * direction);
        out.camera = Camera::look_at(320, 240, 400.0, Vec3(position.x(), position.y(), 1.2),
                                     Vec3(mid.x(), mid.y(), 1.0));
    }

    out.background = GrayFrame(out.camera.width, out.camera.height,
                               scenario.background_level);
    out.truth.frame_rate_hz = fps;
    out.frames.reserve(static_cast<std::size_t>(scenario.frame_count));
    out.clean_silhouettes.reserve(static_cast<std::size_t>(scenario.frame_count));

    bool ever_visible = false;
    for (int f = 0; f < scenario.frame_count; ++f) {
        PoseVector pose = walk_pose(scenario, skeleton, f / fps);
        TrajectoryFrame truth_frame;
        truth_frame.pose = pose;
        truth_frame.weight = 1.0;
        truth_frame.joints = forward_kinematics(skeleton, pose);
        out.truth.frames.push_back(truth_frame);

        SilhouetteImage mask = render_silhouette(out.camera, skeleton, flesh, pose);
        if (mask.count_foreground() > 0) ever_visible = true;

        GrayFrame frame = out.background;
        for (std::size_t i = 0; i < mask.mask.size(); ++i)
            if (mask.mask[i]) frame.pixels[i] = scenario.foreground_level;
        if (scenario.pixel_noise_rate > 0.0) {
            std::mt19937_64 rng(splitmix64(splitmix64(scenario.seed) ^
                                           static_cast<std::uint64_t>(f)));
            for (std::uint8_t& px : frame.pixels) {
                double u = static_cast<double>(rng() >> 11) * 0x1p-53;
                if (u < scenario.pixel_noise_rate)
                    px = px == scenario.background_level ? scenario.foreground_level
                                                         : scenario.background_level;
            }
        }
        out.frames.push_back(std::move(frame));
        out.clean_silhouettes.push_back(std::move(mask));
    }
    if (!ever_visible)
        throw Error("walk: the subject is outside the camera view on every frame");
    return out;
}

EvalReport evaluate(const Trajectory& estimated, const Trajectory& truth) {
    if (estimated.frames.size() != truth.frames.size())
        throw DimensionError("evaluate: estimated has " +
                             std::to_string(estimated.frames.size()) +
                             " frames but truth has " +
                             std::to_string(truth.frames.size()));
    if (estimated.frames.empty())
        throw DimensionError("evaluate: trajectories are empty");

    EvalReport report;
    const double n = static_cast<double>(estimated.frames.size());
    for (int j = 0; j < kNumJoints; ++j) {
        double sum_sq = 0.0;
        double worst = 0.0;
        for (std::size_t f = 0; f < estimated.frames.size(); ++f) {
            double err = (estimated.frames[f].joints[j] - truth.frames[f].joints[j]).norm();
            sum_sq += err * err;
            worst = std::max(worst, err);
        }
        report.rmse_m[static_cast<std::size_t>(j)] = std::sqrt(sum_sq / n);
        report.max_error_m[static_cast<std::size_t>(j)] = worst;
        report.mean_rmse_m += report.rmse_m[static_cast<std::size_t>(j)];
    }
    report.mean_rmse_m /= static_cast<double>(kNumJoints);
    return report;
}

}  // namespace mocap
