#include "mocap/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <vector>

#include <nlohmann/json.hpp>

#include "mocap/errors.hpp"
#include "mocap/gait.hpp"
#include "mocap/ipf.hpp"
#include "mocap/kinematics.hpp"
#include "mocap/likelihood.hpp"
#include "mocap/synth.hpp"
#include "mocap/trajectory.hpp"

namespace mocap {

namespace fs = std::filesystem;

namespace {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory '" + dir.string() + "': " + ec.message());
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    return out;
}

std::vector<std::string> list_frame_files(const std::string& dir) {
    if (!fs::is_directory(dir)) throw IoError("track: '" + dir + "' is not a directory");
    std::vector<std::string> files;
    for (const fs::directory_entry& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const fs::path& p = entry.path();
        if (p.extension() == ".pgm" && p.filename() != "background.pgm")
            files.push_back(p.string());
    }
    std::sort(files.begin(), files.end());
    return files;
}

struct SkeletonSetup {
    Skeleton skeleton;
    FleshModel flesh;
};

SkeletonSetup load_skeleton_setup(const RunConfig& config) {
    if (!config.skeleton_file.empty()) {
        auto [skeleton, flesh] = load_skeleton_file(config.skeleton_file);
        return {std::move(skeleton), flesh};
    }
    return {Skeleton::default_skeleton(config.body_height_m),
            FleshModel::default_flesh(config.body_height_m)};
}

}  // namespace

void run_synth(const RunConfig& config, std::ostream& log) {
    if (config.cameras.size() > 1)
        throw ConfigError("synth: renders a single camera, config lists " +
                          std::to_string(config.cameras.size()));
    Runtime rt = build_runtime(config);
    SyntheticWalk walk = generate_walk(rt.scenario, rt.skeleton, rt.flesh);

    const fs::path out_dir = config.output_dir;
    const fs::path cam_dir = out_dir / "frames" / "cam00";
    ensure_dir(cam_dir);

    write_pgm(walk.background, (cam_dir / "background.pgm").string());
    for (std::size_t f = 0; f < walk.frames.size(); ++f) {
        char name[32];
        std::snprintf(name, sizeof(name), "frame_%06zu.pgm", f);
        write_pgm(walk.frames[f], (cam_dir / name).string());
    }
    write_trajectory_csv(walk.truth, rt.skeleton, (out_dir / "truth.csv").string());

    RunConfig track_config = config;
    track_config.output_dir = ".";
    track_config.frames_dirs = {"frames/cam00"};
    track_config.backgrounds = {"frames/cam00/background.pgm"};
    track_config.cameras = {walk.camera};
    open_out(out_dir / "track_config.json") << serialize_config(track_config);

    log << "synth: wrote " << walk.frames.size() << " frames to " << cam_dir.string()
        << "\n";
    log << "synth: truth trajectory at " << (out_dir / "truth.csv").string() << "\n";
    log << "synth: track-ready config at " << (out_dir / "track_config.json").string()
        << "\n";
}

void run_track(const RunConfig& config, std::ostream& log, int max_frames) {
    Runtime rt = build_runtime(config);
    if (config.cameras.empty())
        throw ConfigError("track: at least one camera is required");
    if (config.frames_dirs.empty())
        throw ConfigError("track: frames_dirs is empty");
    if (config.frames_dirs.size() != config.cameras.size() ||
        config.backgrounds.size() != config.cameras.size())
        throw ConfigError("track: cameras, frames_dirs, and backgrounds counts differ");

    std::vector<std::vector<std::string>> sequences;
    for (const std::string& dir : config.frames_dirs) {
        sequences.push_back(list_frame_files(dir));
        if (sequences.back().empty())
            throw IoError("track: no frames (*.pgm) found in '" + dir + "'");
        if (sequences.back().size() != sequences.front().size())
            throw DimensionError("track: camera sequences have different lengths (" +
                                 std::to_string(sequences.front().size()) + " vs " +
                                 std::to_string(sequences.back().size()) + ")");
    }
    std::size_t frame_count = sequences.front().size();
    if (max_frames > 0)
        frame_count = std::min(frame_count, static_cast<std::size_t>(max_frames));

    std::vector<GrayFrame> backgrounds;
    for (const std::string& path : config.backgrounds)
        backgrounds.push_back(read_pgm(path));

    const fs::path out_dir = config.output_dir;
    ensure_dir(out_dir);
    std::ofstream frame_log = open_out(out_dir / "track_log.csv");
    frame_log << "frame,particles,best_weight,seconds\n";

    IntervalTracker tracker(rt.skeleton, rt.flesh, rt.ipf, config.cameras);
    tracker.set_observer([&](const FrameStats& stats) {
        char line[160];
        std::snprintf(line, sizeof(line), "%d,%zu,%.17g,%.6f", stats.frame_index,
                      stats.particle_count, stats.best_weight, stats.seconds);
        frame_log << line << "\n";
        char progress[160];
        std::snprintf(progress, sizeof(progress),
                      "track: frame %d/%zu weight=%.3f %.2fs", stats.frame_index + 1,
                      frame_count, stats.best_weight, stats.seconds);
        log << progress << std::endl;
    });

    Trajectory trajectory;
    trajectory.frame_rate_hz = config.frame_rate_hz;
    std::vector<SilhouetteImage> observations(config.cameras.size());
    for (std::size_t f = 0; f < frame_count; ++f) {
        try {
            for (std::size_t c = 0; c < config.cameras.size(); ++c) {
                GrayFrame frame = read_pgm(sequences[c][f]);
                extract_silhouette_into(frame, backgrounds[c], config.imaging_threshold,
                                        observations[c]);
            }
            const Particle& estimate = tracker.process_frame(observations);
            TrajectoryFrame out_frame;
            out_frame.pose = estimate.pose;
            out_frame.weight = estimate.weight;
            out_frame.joints = forward_kinematics(rt.skeleton, estimate.pose);
            trajectory.frames.push_back(std::move(out_frame));
        } catch (const Error& e) {
            throw Error("track: frame " + std::to_string(f) + ": " + e.what());
        }
    }

    write_trajectory_csv(trajectory, rt.skeleton, (out_dir / "trajectory.csv").string());
    write_trajectory_json(trajectory, rt.skeleton,
                          (out_dir / "trajectory.json").string());
    log << "track: trajectory written to " << (out_dir / "trajectory.csv").string()
        << "\n";
}

void run_gait(const RunConfig& config, const std::string& trajectory_path,
              std::ostream& log) {
    SkeletonSetup setup = load_skeleton_setup(config);
    const fs::path out_dir = config.output_dir;
    const std::string input = trajectory_path.empty()
                                  ? (out_dir / "trajectory.csv").string()
                                  : trajectory_path;
    Trajectory trajectory = read_trajectory_csv(setup.skeleton, input);
    FootEvents events = detect_foot_events(trajectory, setup.skeleton,
                                           config.gait_velocity_threshold_m_s);
    GaitReport report = compute_gait_report(trajectory, setup.skeleton, events);

    ensure_dir(out_dir);
    nlohmann::ordered_json j{
        {"speed_m_s", report.speed_m_s},
        {"step_length_m", report.step_length_m},
        {"stride_length_m", report.stride_length_m},
        {"stride_width_m", report.stride_width_m},
        {"cadence_steps_min", report.cadence_steps_min},
        {"double_support_s", report.double_support_s},
        {"single_support_left_s", report.single_support_left_s},
        {"single_support_right_s", report.single_support_right_s},
        {"hip_range_left_deg", report.hip_range_left_deg},
        {"hip_range_right_deg", report.hip_range_right_deg},
        {"knee_range_left_deg", report.knee_range_left_deg},
        {"knee_range_right_deg", report.knee_range_right_deg},
    };
    open_out(out_dir / "gait_report.json") << j.dump(2) << "\n";

    {
        std::ofstream csv = open_out(out_dir / "gait_report.csv");
        csv << "speed_m_s,step_length_m,stride_length_m,stride_width_m,"
               "cadence_steps_min,double_support_s,single_support_left_s,"
               "single_support_right_s,hip_range_left_deg,hip_range_right_deg,"
               "knee_range_left_deg,knee_range_right_deg\n";
        csv << format_double(report.speed_m_s) << ","
            << format_double(report.step_length_m) << ","
            << format_double(report.stride_length_m) << ","
            << format_double(report.stride_width_m) << ","
            << format_double(report.cadence_steps_min) << ","
            << format_double(report.double_support_s) << ","
            << format_double(report.single_support_left_s) << ","
            << format_double(report.single_support_right_s) << ","
            << format_double(report.hip_range_left_deg) << ","
            << format_double(report.hip_range_right_deg) << ","
            << format_double(report.knee_range_left_deg) << ","
            << format_double(report.knee_range_right_deg) << "\n";
    }

    // Per-frame longitudinal displacement curves for external plotting.
    {
        const Vec2 axis = longitudinal_axis(trajectory, setup.skeleton);
        const int sacrum = setup.skeleton.joint_index("sacrum");
        const int l_ankle = setup.skeleton.joint_index("l_ankle");
        const int r_ankle = setup.skeleton.joint_index("r_ankle");
        auto along = [&](const Vec3& p) { return Vec2(p.x(), p.y()).dot(axis); };
        const double origin = along(trajectory.frames.front().joints[sacrum]);
        const double dt = trajectory.frame_period_s();
        std::ofstream csv = open_out(out_dir / "ankle_displacement.csv");
        csv << "frame,time_s,sacrum_m,left_ankle_m,right_ankle_m\n";
        for (std::size_t f = 0; f < trajectory.frames.size(); ++f) {
            const TrajectoryFrame& frame = trajectory.frames[f];
            csv << f << "," << format_double(static_cast<double>(f) * dt) << ","
                << format_double(along(frame.joints[sacrum]) - origin) << ","
                << format_double(along(frame.joints[l_ankle]) - origin) << ","
                << format_double(along(frame.joints[r_ankle]) - origin) << "\n";
        }
    }

    log << "gait: speed " << report.speed_m_s << " m/s, step "
        << report.step_length_m << " m, stride " << report.stride_length_m
        << " m, cadence " << report.cadence_steps_min << " steps/min\n";
    log << "gait: report written to " << (out_dir / "gait_report.json").string() << "\n";
}

void run_eval(const RunConfig& config, const std::string& estimated_path,
              const std::string& truth_path, std::ostream& log) {
    SkeletonSetup setup = load_skeleton_setup(config);
    const fs::path out_dir = config.output_dir;
    const std::string est = estimated_path.empty()
                                ? (out_dir / "trajectory.csv").string()
                                : estimated_path;
    const std::string truth = truth_path.empty() ? (out_dir / "truth.csv").string()
                                                 : truth_path;
    Trajectory estimated = read_trajectory_csv(setup.skeleton, est);
    Trajectory reference = read_trajectory_csv(setup.skeleton, truth);
    EvalReport report = evaluate(estimated, reference);

    ensure_dir(out_dir);
    nlohmann::ordered_json joints = nlohmann::ordered_json::array();
    for (int j = 0; j < kNumJoints; ++j)
        joints.push_back({{"joint", setup.skeleton.joints[static_cast<std::size_t>(j)].name},
                          {"rmse_m", report.rmse_m[static_cast<std::size_t>(j)]},
                          {"max_error_m", report.max_error_m[static_cast<std::size_t>(j)]}});
    nlohmann::ordered_json j{{"mean_rmse_m", report.mean_rmse_m},
                             {"joints", std::move(joints)}};
    open_out(out_dir / "eval_report.json") << j.dump(2) << "\n";

    std::ofstream csv = open_out(out_dir / "eval_report.csv");
    csv << "joint,rmse_m,max_error_m\n";
    for (int jo = 0; jo < kNumJoints; ++jo)
        csv << setup.skeleton.joints[static_cast<std::size_t>(jo)].name << ","
            << format_double(report.rmse_m[static_cast<std::size_t>(jo)]) << ","
            << format_double(report.max_error_m[static_cast<std::size_t>(jo)]) << "\n";

    log << "eval: mean joint rmse " << report.mean_rmse_m << " m\n";
    log << "eval: report written to " << (out_dir / "eval_report.json").string() << "\n";
}

void run_debug_weight(const std::string& observed_path, const std::string& model_path,
                      std::ostream& log) {
    SilhouetteImage observed = read_silhouette_pgm(observed_path);
    SilhouetteImage model = read_silhouette_pgm(model_path);
    PixelCounts counts = pixel_counts(observed, model);
    log << "common=" << counts.n_common << " silhouette_only=" << counts.n_sil_only
        << " model_only=" << counts.n_model_only
        << " weight=" << weight_from_counts(counts) << "\n";
}

void run_export_skeleton(const RunConfig& config, const std::string& out_path,
                         std::ostream& log) {
    SkeletonSetup setup = load_skeleton_setup(config);
    save_skeleton_file(setup.skeleton, setup.flesh, out_path);
    log << "skeleton written to " << out_path << "\n";
}

}  // namespace mocap
