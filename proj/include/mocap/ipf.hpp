#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "mocap/camera.hpp"
#include "mocap/image.hpp"
#include "mocap/skeleton.hpp"
#include "mocap/types.hpp"

namespace mocap {

/// One candidate body configuration and its silhouette-match score.
struct Particle {
    PoseVector pose;
    double weight = 0.0;
};

struct ParticleSet {
    std::vector<Particle> particles;
    int frame_index = 0;
};

/// Tracker parameters. Angles are radians here; the config file layer owns
/// the degree conversion.
struct IpfConfig {
    /// Dofs explored by the deterministic grid (the filter splits the pose
    /// into these and the rest, which only receive noise).
    std::vector<int> interesting_dims;
    double grid_step = deg_to_rad(5.0);
    int grid_levels = 3;
    int m_selected = 81;
    /// Per-dof white-noise sigma applied to dofs outside interesting_dims.
    std::array<double, kNumDofs> noise_sigma{};
    std::uint64_t rng_seed = 0;
    /// Coarse per-dof value lists; initialization scores their full
    /// Cartesian product applied to base_pose.
    std::vector<std::pair<int, std::vector<double>>> init_grid;
    PoseVector base_pose;
    /// Worker threads for measurement; 0 means hardware concurrency.
    int threads = 0;

    /// Grid size per selected particle: grid_levels^|interesting_dims|.
    std::size_t interval_count() const;
    /// Population after prediction: m_selected * interval_count().
    std::size_t particle_count() const;
    std::size_t init_lattice_count() const;

    void validate(const Skeleton& skeleton) const;

    /// Walking defaults: grid over both hip and knee flexions (3^4 = 81
    /// intervals, 81 selected, 6561 particles), 2 degree / 2 cm noise on the
    /// remaining dofs (root_ty excepted, see defaults()), standing base
    /// pose, and a coarse lattice over root ground position and leg
    /// flexions.
    static IpfConfig defaults(const Skeleton& skeleton);
};

/// Top-m particles by weight: stable descending sort (ties keep original
/// order), exact-duplicate poses dropped keeping the heaviest-ranked copy,
/// then padded by repeating the heaviest so the result always has m entries.
std::vector<Particle> select_particles(const ParticleSet& set, int m);

/// Expands each selected particle into its deterministic grid over the
/// interesting dims, then perturbs every other dof with seeded Gaussian
/// noise and clamps to limits. Output size is exactly
/// selected.size() * interval_count(); weights are reset to zero. The noise
/// substream is keyed by (rng_seed, frame_index, output ordinal), so the
/// result does not depend on evaluation order.
ParticleSet predict_particles(std::span<const Particle> selected,
                              const IpfConfig& config, const Skeleton& skeleton,
                              int frame_index);

/// Scores every particle against the observed silhouettes (one per camera,
/// dimensions matching that camera) and returns the index of the heaviest
/// particle, ties resolved to the lowest index. Scoring runs on `threads`
/// workers; weights land in per-particle slots so the outcome is identical
/// to sequential execution.
std::size_t measure_particles(ParticleSet& set, const Skeleton& skeleton,
                              const FleshModel& flesh, std::span<const Camera> cameras,
                              std::span<const SilhouetteImage> observations,
                              int threads);

/// Per-frame progress sample, emitted after the frame's measurement.
struct FrameStats {
    int frame_index = 0;
    /// Population that was scored: the prediction size on tracking frames,
    /// the initialization lattice size on frame 0.
    std::size_t particle_count = 0;
    double best_weight = 0.0;
    double seconds = 0.0;
};

/// Sequential tracker: initialization on the first frame, then one
/// Selection, Prediction, Measure cycle per subsequent frame.
class IntervalTracker {
public:
    IntervalTracker(Skeleton skeleton, FleshModel flesh, IpfConfig config,
                    std::vector<Camera> cameras);

    /// Consumes the next frame's silhouettes (one per camera, in camera
    /// order) and returns the new estimate.
    const Particle& process_frame(std::span<const SilhouetteImage> observations);

    const Particle& estimate() const { return estimate_; }
    int frames_processed() const { return frames_processed_; }
    const Skeleton& skeleton() const { return skeleton_; }

    /// Called once per processed frame, after measurement.
    void set_observer(std::function<void(const FrameStats&)> observer) {
        observer_ = std::move(observer);
    }

private:
    Skeleton skeleton_;
    FleshModel flesh_;
    IpfConfig config_;
    std::vector<Camera> cameras_;
    ParticleSet set_;
    Particle estimate_;
    int frames_processed_ = 0;
    std::function<void(const FrameStats&)> observer_;
};

}  // namespace mocap
