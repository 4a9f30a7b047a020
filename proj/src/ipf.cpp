#include "mocap/ipf.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <exception>
#include <numeric>
#include <random>
#include <string>
#include <thread>
#include <unordered_set>

#include "mocap/errors.hpp"
#include "mocap/kinematics.hpp"
#include "mocap/likelihood.hpp"
#include "mocap/render.hpp"

namespace mocap {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Byte key for exact pose identity; negative zeros fold onto positive so
/// poses comparing equal never hash apart.
std::string pose_key(const PoseVector& pose) {
    std::array<double, kNumDofs> normalized;
    for (int i = 0; i < kNumDofs; ++i) normalized[static_cast<std::size_t>(i)] = pose[i] == 0.0 ? 0.0 : pose[i];
    std::string key(sizeof(normalized), '\0');
    std::memcpy(key.data(), normalized.data(), sizeof(normalized));
    return key;
}

int resolve_threads(int threads) {
    if (threads < 0) throw ConfigError("tracker: thread count must be >= 0");
    if (threads > 0) return threads;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace

std::size_t IpfConfig::interval_count() const {
    std::size_t count = 1;
    for (std::size_t i = 0; i < interesting_dims.size(); ++i)
        count *= static_cast<std::size_t>(grid_levels);
    return count;
}

std::size_t IpfConfig::particle_count() const {
    return static_cast<std::size_t>(m_selected) * interval_count();
}

std::size_t IpfConfig::init_lattice_count() const {
    std::size_t count = 1;
    for (const auto& [dim, values] : init_grid) count *= values.size();
    return count;
}

void IpfConfig::validate(const Skeleton& skeleton) const {
    if (m_selected < 1) throw ConfigError("tracker: m_selected must be >= 1");
    if (grid_levels <= 0 || grid_levels % 2 == 0)
        throw ConfigError("tracker: grid_levels must be odd and positive, got " +
                          std::to_string(grid_levels));
    if (!(grid_step > 0.0)) throw ConfigError("tracker: grid_step must be positive");
    if (interesting_dims.empty())
        throw ConfigError("tracker: at least one interesting dof is required");
    for (std::size_t a = 0; a < interesting_dims.size(); ++a) {
        int dim = interesting_dims[a];
        if (dim < 0 || dim >= kNumDofs)
            throw ConfigError("tracker: interesting dof index " + std::to_string(dim) +
                              " out of range");
        for (std::size_t b = a + 1; b < interesting_dims.size(); ++b)
            if (interesting_dims[b] == dim)
                throw ConfigError("tracker: repeated interesting dof index " +
                                  std::to_string(dim));
    }
    for (int i = 0; i < kNumDofs; ++i)
        if (!(noise_sigma[static_cast<std::size_t>(i)] >= 0.0))
            throw ConfigError("tracker: noise sigma for dof '" +
                              skeleton.dofs[static_cast<std::size_t>(i)].name +
                              "' must be >= 0");
    if (threads < 0) throw ConfigError("tracker: threads must be >= 0");

    std::unordered_set<int> seen;
    for (const auto& [dim, values] : init_grid) {
        if (dim < 0 || dim >= kNumDofs)
            throw ConfigError("tracker: init grid dof index " + std::to_string(dim) +
                              " out of range");
        if (!seen.insert(dim).second)
            throw ConfigError("tracker: init grid repeats dof '" +
                              skeleton.dofs[static_cast<std::size_t>(dim)].name + "'");
        if (values.empty())
            throw ConfigError("tracker: init grid for dof '" +
                              skeleton.dofs[static_cast<std::size_t>(dim)].name +
                              "' has no values");
        const Dof& d = skeleton.dofs[static_cast<std::size_t>(dim)];
        for (double v : values)
            if (v < d.min_value || v > d.max_value)
                throw ConfigError("tracker: init grid value for dof '" + d.name +
                                  "' outside its limits");
    }
    validate_pose(skeleton, base_pose);
}

IpfConfig IpfConfig::defaults(const Skeleton& skeleton) {
    IpfConfig c;
    for (const char* name : {"l_hip_flex", "r_hip_flex", "l_knee_flex", "r_knee_flex"}) {
        int idx = skeleton.dof_index(name);
        if (idx < 0)
            throw ConfigError(std::string("tracker: default config needs dof '") +
                              name + "'");
        c.interesting_dims.push_back(idx);
    }
    for (int i = 0; i < kNumDofs; ++i) {
        const Dof& d = skeleton.dofs[static_cast<std::size_t>(i)];
        c.noise_sigma[static_cast<std::size_t>(i)] =
            d.kind == DofKind::Translation ? 0.02 : deg_to_rad(2.0);
    }
    // Depth is nearly unobservable to a single silhouette, and the overlap
    // score mildly favors shrinking a misaligned model away from the camera,
    // so an unconstrained depth axis drifts. The default walk runs along +x,
    // leaving +y close to the view axis; keep that component on a short
    // leash.
    const int depth = skeleton.dof_index("root_ty");
    if (depth >= 0) c.noise_sigma[static_cast<std::size_t>(depth)] = 0.005;
    c.rng_seed = 1234;
    c.base_pose = standing_pose(skeleton);
    auto grid = [&](const char* name, std::vector<double> values) {
        c.init_grid.emplace_back(skeleton.dof_index(name), std::move(values));
    };
    grid("root_tx", {-1.0, -0.5, 0.0, 0.5, 1.0});
    grid("root_ty", {-1.0, -0.5, 0.0, 0.5, 1.0});
    grid("l_hip_flex", {deg_to_rad(-20.0), 0.0, deg_to_rad(20.0)});
    grid("r_hip_flex", {deg_to_rad(-20.0), 0.0, deg_to_rad(20.0)});
    grid("l_knee_flex", {0.0, deg_to_rad(25.0), deg_to_rad(50.0)});
    grid("r_knee_flex", {0.0, deg_to_rad(25.0), deg_to_rad(50.0)});
    c.validate(skeleton);
    return c;
}

std::vector<Particle> select_particles(const ParticleSet& set, int m) {
    if (set.particles.empty()) throw Error("select: particle set is empty");
    if (m < 1) throw ConfigError("select: m must be >= 1");

    std::vector<const Particle*> ranked;
    ranked.reserve(set.particles.size());
    for (const Particle& p : set.particles) ranked.push_back(&p);
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const Particle* a, const Particle* b) {
                         return a->weight > b->weight;
                     });

    std::vector<Particle> out;
    out.reserve(static_cast<std::size_t>(m));
    std::unordered_set<std::string> seen;
    for (const Particle* p : ranked) {
        if (out.size() == static_cast<std::size_t>(m)) break;
        if (seen.insert(pose_key(p->pose)).second) out.push_back(*p);
    }
    while (out.size() < static_cast<std::size_t>(m)) out.push_back(out.front());
    return out;
}

ParticleSet predict_particles(std::span<const Particle> selected,
                              const IpfConfig& config, const Skeleton& skeleton,
                              int frame_index) {
    if (selected.empty()) throw Error("predict: no selected particles");

    std::array<bool, kNumDofs> interesting{};
    for (int dim : config.interesting_dims)
        interesting[static_cast<std::size_t>(dim)] = true;

    const std::size_t intervals = config.interval_count();
    ParticleSet out;
    out.frame_index = frame_index;
    out.particles.reserve(selected.size() * intervals);

    const std::uint64_t frame_key =
        splitmix64(splitmix64(config.rng_seed) ^ static_cast<std::uint64_t>(frame_index));

    for (std::size_t j = 0; j < selected.size(); ++j) {
        std::vector<PoseVector> expanded =
            expand_interval(selected[j].pose, config.interesting_dims, config.grid_step,
                            config.grid_levels, skeleton);
        for (std::size_t e = 0; e < expanded.size(); ++e) {
            std::uint64_t ordinal = j * intervals + e;
            std::mt19937_64 rng(splitmix64(frame_key ^ ordinal));
            PoseVector pose = expanded[e];
            for (int d = 0; d < kNumDofs; ++d) {
                if (interesting[static_cast<std::size_t>(d)]) continue;
                // Two uniform draws per dof regardless of sigma, so a dof's
                // substream position does not depend on other sigmas.
                double u1 = (static_cast<double>(rng() >> 11) + 1.0) * 0x1p-53;
                double u2 = static_cast<double>(rng() >> 11) * 0x1p-53;
                double sigma = config.noise_sigma[static_cast<std::size_t>(d)];
                if (sigma > 0.0) {
                    double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
                    const Dof& dof = skeleton.dofs[static_cast<std::size_t>(d)];
                    pose[d] = std::clamp(pose[d] + sigma * z, dof.min_value,
                                         dof.max_value);
                }
            }
            out.particles.push_back({pose, 0.0});
        }
    }
    return out;
}

std::size_t measure_particles(ParticleSet& set, const Skeleton& skeleton,
                              const FleshModel& flesh, std::span<const Camera> cameras,
                              std::span<const SilhouetteImage> observations,
                              int threads) {
    if (set.particles.empty()) throw Error("measure: particle set is empty");
    if (cameras.empty()) throw Error("measure: no cameras");
    if (observations.size() != cameras.size())
        throw DimensionError("measure: got " + std::to_string(observations.size()) +
                             " observations for " + std::to_string(cameras.size()) +
                             " cameras");
    for (std::size_t c = 0; c < cameras.size(); ++c)
        if (observations[c].width != cameras[c].width ||
            observations[c].height != cameras[c].height)
            throw DimensionError("measure: observation " + std::to_string(c) +
                                 " does not match its camera dimensions");

    auto score_range = [&](std::size_t begin, std::size_t end) {
        std::vector<SilhouetteImage> scratch(cameras.size());
        std::vector<double> camera_weights(cameras.size());
        for (std::size_t i = begin; i < end; ++i) {
            std::vector<CapsuleSegment> segments =
                pose_segments(skeleton, flesh, set.particles[i].pose);
            for (std::size_t c = 0; c < cameras.size(); ++c) {
                render_segments_into(cameras[c], segments, scratch[c]);
                camera_weights[c] =
                    weight_from_counts(pixel_counts(observations[c], scratch[c]));
            }
            set.particles[i].weight = combine_cameras(camera_weights);
        }
    };

    const std::size_t n = set.particles.size();
    int workers = std::min<int>(resolve_threads(threads), static_cast<int>(n));
    if (workers <= 1) {
        score_range(0, n);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
        std::size_t chunk = (n + static_cast<std::size_t>(workers) - 1) /
                            static_cast<std::size_t>(workers);
        for (int w = 0; w < workers; ++w) {
            std::size_t begin = static_cast<std::size_t>(w) * chunk;
            std::size_t end = std::min(n, begin + chunk);
            pool.emplace_back([&, w, begin, end] {
                try {
                    score_range(begin, end);
                } catch (...) {
                    errors[static_cast<std::size_t>(w)] = std::current_exception();
                }
            });
        }
        for (std::thread& t : pool) t.join();
        for (const std::exception_ptr& e : errors)
            if (e) std::rethrow_exception(e);
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (set.particles[i].weight > set.particles[best].weight) best = i;
    return best;
}

IntervalTracker::IntervalTracker(Skeleton skeleton, FleshModel flesh, IpfConfig config,
                                 std::vector<Camera> cameras)
    : skeleton_(std::move(skeleton)),
      flesh_(std::move(flesh)),
      config_(std::move(config)),
      cameras_(std::move(cameras)) {
    skeleton_.validate();
    config_.validate(skeleton_);
    if (cameras_.empty()) throw ConfigError("tracker: at least one camera is required");
    for (const Camera& cam : cameras_) cam.validate();
}

const Particle& IntervalTracker::process_frame(
    std::span<const SilhouetteImage> observations) {
    auto start = std::chrono::steady_clock::now();
    const int frame = frames_processed_;

    if (frame == 0) {
        // Exhaustive scoring of the coarse lattice, kept sorted so the whole
        // population is available to the first selection.
        if (config_.init_lattice_count() == 0)
            throw ConfigError("tracker: initialization lattice is empty");
        set_.particles.clear();
        set_.frame_index = 0;
        std::vector<std::size_t> ticks(config_.init_grid.size(), 0);
        const std::size_t count = config_.init_lattice_count();
        set_.particles.reserve(count);
        for (std::size_t n = 0; n < count; ++n) {
            PoseVector pose = config_.base_pose;
            for (std::size_t d = 0; d < config_.init_grid.size(); ++d)
                pose[config_.init_grid[d].first] = config_.init_grid[d].second[ticks[d]];
            set_.particles.push_back({pose, 0.0});
            for (std::size_t d = ticks.size(); d-- > 0;) {
                if (++ticks[d] < config_.init_grid[d].second.size()) break;
                ticks[d] = 0;
            }
        }
        measure_particles(set_, skeleton_, flesh_, cameras_, observations,
                          config_.threads);
        std::stable_sort(set_.particles.begin(), set_.particles.end(),
                         [](const Particle& a, const Particle& b) {
                             return a.weight > b.weight;
                         });
        estimate_ = set_.particles.front();
    } else {
        std::vector<Particle> selected = select_particles(set_, config_.m_selected);
        set_ = predict_particles(selected, config_, skeleton_, frame);
        std::size_t best = measure_particles(set_, skeleton_, flesh_, cameras_,
                                             observations, config_.threads);
        estimate_ = set_.particles[best];
    }

    ++frames_processed_;
    if (observer_) {
        std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
        observer_({frame, set_.particles.size(), estimate_.weight, elapsed.count()});
    }
    return estimate_;
}

}  // namespace mocap
