#pragma once

#include <iosfwd>
#include <string>

#include "mocap/config.hpp"

namespace mocap {

/// Generates the configured synthetic walk into output_dir: a frame
/// directory with background, the ground-truth trajectory, and a
/// track-ready config pointing at them.
void run_synth(const RunConfig& config, std::ostream& log);

/// Tracks the configured frame sequences and writes trajectory.csv,
/// trajectory.json, and a per-frame progress log into output_dir.
/// `max_frames` > 0 limits how many frames are processed.
void run_track(const RunConfig& config, std::ostream& log, int max_frames = 0);

/// Derives gait parameters from a tracked trajectory CSV (empty path means
/// output_dir/trajectory.csv) and writes gait_report.json/.csv plus the
/// per-frame ankle longitudinal-displacement curves.
void run_gait(const RunConfig& config, const std::string& trajectory_path,
              std::ostream& log);

/// Compares an estimated trajectory CSV against a ground-truth one (empty
/// paths mean output_dir/trajectory.csv and output_dir/truth.csv) and writes
/// eval_report.json/.csv.
void run_eval(const RunConfig& config, const std::string& estimated_path,
              const std::string& truth_path, std::ostream& log);

/// Prints the pixel counts and overlap weight for two silhouette images.
void run_debug_weight(const std::string& observed_path, const std::string& model_path,
                      std::ostream& log);

/// Writes the active skeleton and flesh model as a JSON file.
void run_export_skeleton(const RunConfig& config, const std::string& out_path,
                         std::ostream& log);

}  // namespace mocap
