// Reference implementations used only by tests. They restate the geometric
// and counting definitions as plain loops, independent of the library's
// optimized code paths, so the two can be compared exactly.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "mocap/camera.hpp"
#include "mocap/image.hpp"
#include "mocap/likelihood.hpp"
#include "mocap/render.hpp"
#include "mocap/trajectory.hpp"
#include "mocap/types.hpp"

namespace oracles {

// Full-image point-in-stadium test: no bounding boxes, no incremental math.
inline mocap::SilhouetteImage reference_render(
    const mocap::Camera& camera, const std::vector<mocap::CapsuleSegment>& segments) {
    mocap::SilhouetteImage out(camera.width, camera.height);
    for (int y = 0; y < camera.height; ++y) {
        for (int x = 0; x < camera.width; ++x) {
            const double px = x + 0.5;
            const double py = y + 0.5;
            bool inside = false;
            for (const mocap::CapsuleSegment& seg : segments) {
                mocap::Vec3 c0 = camera.rotation * seg.p0 + camera.translation;
                mocap::Vec3 c1 = camera.rotation * seg.p1 + camera.translation;
                if (c0.z() < 1e-6 || c1.z() < 1e-6) continue;
                const double u0 = camera.focal_px * c0.x() / c0.z() + camera.center_u;
                const double v0 = camera.focal_px * c0.y() / c0.z() + camera.center_v;
                const double u1 = camera.focal_px * c1.x() / c1.z() + camera.center_u;
                const double v1 = camera.focal_px * c1.y() / c1.z() + camera.center_v;
                const double w0 = camera.focal_px * seg.radius / c0.z();
                const double w1 = camera.focal_px * seg.radius / c1.z();
                const double du = u1 - u0;
                const double dv = v1 - v0;
                const double len2 = du * du + dv * dv;
                double t = 0.0;
                if (len2 > 0.0)
                    t = std::clamp(((px - u0) * du + (py - v0) * dv) / len2, 0.0, 1.0);
                const double cx = u0 + t * du;
                const double cy = v0 + t * dv;
                const double w = w0 + t * (w1 - w0);
                const double dx = px - cx;
                const double dy = py - cy;
                if (dx * dx + dy * dy <= w * w) {
                    inside = true;
                    break;
                }
            }
            if (inside) out.at(x, y) = 1;
        }
    }
    return out;
}

inline mocap::PixelCounts reference_pixel_counts(const mocap::SilhouetteImage& observed,
                                                 const mocap::SilhouetteImage& model) {
    mocap::PixelCounts counts;
    for (int y = 0; y < observed.height; ++y) {
        for (int x = 0; x < observed.width; ++x) {
            const bool in_obs = observed.at(x, y) != 0;
            const bool in_model = model.at(x, y) != 0;
            if (in_obs && in_model) ++counts.n_common;
            if (in_obs && !in_model) ++counts.n_sil_only;
            if (!in_obs && in_model) ++counts.n_model_only;
        }
    }
    return counts;
}

inline double reference_weight(const mocap::SilhouetteImage& observed,
                               const mocap::SilhouetteImage& model) {
    mocap::PixelCounts c = reference_pixel_counts(observed, model);
    const std::size_t denom = c.n_sil_only + c.n_model_only;
    if (denom == 0) return static_cast<double>(c.n_common);
    return static_cast<double>(c.n_common) / static_cast<double>(denom);
}

// Two-pass RMSE: per joint, mean squared 3D error over frames.
inline double reference_joint_rmse(const mocap::Trajectory& estimated,
                                   const mocap::Trajectory& truth, int joint) {
    double sum = 0.0;
    for (std::size_t f = 0; f < estimated.frames.size(); ++f) {
        const double e =
            (estimated.frames[f].joints[joint] - truth.frames[f].joints[joint]).norm();
        sum += e * e;
    }
    return std::sqrt(sum / static_cast<double>(estimated.frames.size()));
}

}  // namespace oracles
