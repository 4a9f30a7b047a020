#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mocap/camera.hpp"
#include "mocap/ipf.hpp"
#include "mocap/skeleton.hpp"
#include "mocap/synth.hpp"

namespace mocap {

inline bool operator==(const Camera& a, const Camera& b) {
    return a.width == b.width && a.height == b.height && a.focal_px == b.focal_px &&
           a.center_u == b.center_u && a.center_v == b.center_v &&
           a.rotation == b.rotation && a.translation == b.translation;
}

/// Default initialization lattice: coarse root ground position and leg
/// flexions, in config units (degrees for the rotations).
std::vector<std::pair<std::string, std::vector<double>>> default_init_grid();

/// Tracker section of the run configuration. Everything is in user units
/// (degrees, meters) and dofs are referenced by name; conversion to the
/// runtime IpfConfig happens in build_runtime.
struct IpfSection {
    std::vector<std::string> interesting_dofs{"l_hip_flex", "r_hip_flex",
                                              "l_knee_flex", "r_knee_flex"};
    double grid_step_deg = 5.0;
    int grid_levels = 3;
    int m_selected = 81;
    std::uint64_t rng_seed = 1234;
    /// Default white-noise sigmas by dof kind, overridable per dof (override
    /// values are degrees for rotations, meters for translations). The stock
    /// override keeps the near-view-axis root component of the default
    /// scenario from drifting; replace it when the camera or heading moves.
    double noise_sigma_deg = 2.0;
    double noise_sigma_m = 0.02;
    std::vector<std::pair<std::string, double>> noise_sigma_overrides{
        {"root_ty", 0.005}};
    /// Initialization lattice: per-dof absolute value lists (degrees for
    /// rotations).
    std::vector<std::pair<std::string, std::vector<double>>> init_grid =
        default_init_grid();

    bool operator==(const IpfSection&) const = default;
};

/// Synthetic-sequence section; mirrors WalkScenario minus the fields owned
/// by the top level (body height, frame rate, camera).
struct ScenarioSection {
    double step_length_m = 0.45;
    double cadence_steps_min = 90.0;
    double heading_deg = 0.0;
    int frame_count = 40;
    double pixel_noise_rate = 0.0;
    std::uint64_t seed = 0;
    int background_level = 50;
    int foreground_level = 200;
    double knee_lift_deg = 20.0;

    bool operator==(const ScenarioSection&) const = default;
};

struct RunConfig {
    std::string output_dir = "out";
    double frame_rate_hz = 20.0;
    double body_height_m = 1.75;
    /// Optional skeleton definition file; empty selects the built-in model.
    std::string skeleton_file;
    int threads = 0;
    int imaging_threshold = 30;
    double gait_velocity_threshold_m_s = 0.1;
    std::vector<std::string> frames_dirs;
    std::vector<std::string> backgrounds;
    std::vector<Camera> cameras;
    IpfSection ipf;
    ScenarioSection scenario;

    bool operator==(const RunConfig&) const = default;
};

/// Parses a JSON run configuration. Unknown keys, malformed values, and
/// inconsistent camera/frame-directory counts raise ConfigError with the
/// offending key path; defaults fill every omitted field.
RunConfig parse_config(const std::string& text);

/// File variant; relative paths inside the config resolve against the config
/// file's directory.
RunConfig load_config_file(const std::string& path);

/// Canonical JSON with every field explicit; parse_config(serialize_config(c))
/// equals c.
std::string serialize_config(const RunConfig& config);

/// Everything the commands need, with angles converted to radians.
struct Runtime {
    Skeleton skeleton;
    FleshModel flesh;
    IpfConfig ipf;
    std::vector<Camera> cameras;
    WalkScenario scenario;
};

Runtime build_runtime(const RunConfig& config);

}  // namespace mocap
