#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mocap/commands.hpp"
#include "mocap/config.hpp"
#include "mocap/errors.hpp"

namespace {

struct CommonOptions {
    std::string config_path;
    std::string output_dir;
    std::int64_t seed = -1;
    int threads = -1;
};

void add_common(CLI::App* cmd, CommonOptions& opts, bool config_required) {
    auto* config = cmd->add_option("--config", opts.config_path,
                                   "Run configuration file (JSON)");
    if (config_required) config->required();
    cmd->add_option("--output", opts.output_dir, "Override the output directory");
    cmd->add_option("--seed", opts.seed,
                    "Override both the scenario seed and the tracker rng seed");
    cmd->add_option("--threads", opts.threads, "Override the worker thread count");
}

mocap::RunConfig load(const CommonOptions& opts) {
    mocap::RunConfig config = opts.config_path.empty()
                                  ? mocap::RunConfig{}
                                  : mocap::load_config_file(opts.config_path);
    if (!opts.output_dir.empty()) config.output_dir = opts.output_dir;
    if (opts.seed >= 0) {
        config.scenario.seed = static_cast<std::uint64_t>(opts.seed);
        config.ipf.rng_seed = static_cast<std::uint64_t>(opts.seed);
    }
    if (opts.threads >= 0) config.threads = opts.threads;
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Markerless gait capture: silhouette-based pose tracking and "
                 "gait analysis"};
    app.require_subcommand(1);

    CommonOptions synth_opts;
    int synth_frames = 0;
    CLI::App* synth = app.add_subcommand(
        "synth", "Generate a synthetic walking sequence with ground truth");
    add_common(synth, synth_opts, true);
    synth->add_option("--frames", synth_frames, "Override the frame count");

    CommonOptions track_opts;
    int track_frames = 0;
    CLI::App* track = app.add_subcommand(
        "track", "Track a frame sequence and write the estimated trajectory");
    add_common(track, track_opts, true);
    track->add_option("--frames", track_frames, "Process only the first N frames");

    CommonOptions gait_opts;
    std::string gait_trajectory;
    CLI::App* gait = app.add_subcommand(
        "gait", "Compute gait parameters from a tracked trajectory");
    add_common(gait, gait_opts, true);
    gait->add_option("--trajectory", gait_trajectory,
                     "Trajectory CSV (default: <output_dir>/trajectory.csv)");

    CommonOptions eval_opts;
    std::string eval_estimated, eval_truth;
    CLI::App* eval = app.add_subcommand(
        "eval", "Compare an estimated trajectory against ground truth");
    add_common(eval, eval_opts, true);
    eval->add_option("--estimated", eval_estimated,
                     "Estimated trajectory CSV (default: <output_dir>/trajectory.csv)");
    eval->add_option("--truth", eval_truth,
                     "Ground-truth trajectory CSV (default: <output_dir>/truth.csv)");

    std::string weight_observed, weight_model;
    CLI::App* weight = app.add_subcommand(
        "debug-weight", "Print pixel counts and overlap weight for two silhouettes");
    weight->add_option("observed", weight_observed, "Observed silhouette PGM")
        ->required();
    weight->add_option("model", weight_model, "Model silhouette PGM")->required();

    CommonOptions export_opts;
    std::string export_path = "skeleton.json";
    CLI::App* export_skel = app.add_subcommand(
        "export-skeleton", "Write the active skeleton definition as JSON");
    add_common(export_skel, export_opts, false);
    export_skel->add_option("--out", export_path, "Output path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (synth->parsed()) {
            mocap::RunConfig config = load(synth_opts);
            if (synth_frames > 0) config.scenario.frame_count = synth_frames;
            mocap::run_synth(config, std::cout);
        } else if (track->parsed()) {
            mocap::run_track(load(track_opts), std::cout, track_frames);
        } else if (gait->parsed()) {
            mocap::run_gait(load(gait_opts), gait_trajectory, std::cout);
        } else if (eval->parsed()) {
            mocap::run_eval(load(eval_opts), eval_estimated, eval_truth, std::cout);
        } else if (weight->parsed()) {
            mocap::run_debug_weight(weight_observed, weight_model, std::cout);
        } else if (export_skel->parsed()) {
            mocap::run_export_skeleton(load(export_opts), export_path, std::cout);
        }
    } catch (const mocap::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
