#include "mocap/render.hpp"

#include <algorithm>
#include <cmath>

#include "mocap/kinematics.hpp"

namespace mocap {

std::vector<CapsuleSegment> pose_segments(const Skeleton& skeleton,
                                          const FleshModel& flesh,
                                          const PoseVector& pose) {
    JointPositions joints = forward_kinematics(skeleton, pose);
    std::vector<CapsuleSegment> segments;
    segments.reserve(skeleton.rendered_segments.size());
    for (std::size_t s = 0; s < skeleton.rendered_segments.size(); ++s) {
        const auto& [parent, child] = skeleton.rendered_segments[s];
        segments.push_back({joints[parent], joints[child], flesh.radii[s]});
    }
    return segments;
}

SilhouetteImage render_segments(const Camera& camera,
                                std::span<const CapsuleSegment> segments) {
    SilhouetteImage out;
    render_segments_into(camera, segments, out);
    return out;
}

void render_segments_into(const Camera& camera,
                          std::span<const CapsuleSegment> segments,
                          SilhouetteImage& out) {
    camera.validate();
    out.width = camera.width;
    out.height = camera.height;
    out.mask.assign(static_cast<std::size_t>(camera.width) *
                        static_cast<std::size_t>(camera.height),
                    0);

    constexpr double kMinDepth = 1e-6;
    for (const CapsuleSegment& seg : segments) {
        Vec3 c0 = camera.rotation * seg.p0 + camera.translation;
        Vec3 c1 = camera.rotation * seg.p1 + camera.translation;
        if (c0.z() < kMinDepth || c1.z() < kMinDepth) continue;

        double u0 = camera.focal_px * c0.x() / c0.z() + camera.center_u;
        double v0 = camera.focal_px * c0.y() / c0.z() + camera.center_v;
        double u1 = camera.focal_px * c1.x() / c1.z() + camera.center_u;
        double v1 = camera.focal_px * c1.y() / c1.z() + camera.center_v;
        double w0 = camera.focal_px * seg.radius / c0.z();
        double w1 = camera.focal_px * seg.radius / c1.z();

        // The stadium lies inside the bounding box of its endpoint disks.
        double min_u = std::min(u0 - w0, u1 - w1);
        double max_u = std::max(u0 + w0, u1 + w1);
        double min_v = std::min(v0 - w0, v1 - w1);
        double max_v = std::max(v0 + w0, v1 + w1);
        int x_lo = std::max(0, static_cast<int>(std::floor(min_u - 0.5)));
        int x_hi = std::min(camera.width - 1, static_cast<int>(std::ceil(max_u - 0.5)));
        int y_lo = std::max(0, static_cast<int>(std::floor(min_v - 0.5)));
        int y_hi = std::min(camera.height - 1, static_cast<int>(std::ceil(max_v - 0.5)));
        if (x_lo > x_hi || y_lo > y_hi) continue;

        double du = u1 - u0;
        double dv = v1 - v0;
        double len2 = du * du + dv * dv;
        double inv_len2 = len2 > 0.0 ? 1.0 / len2 : 0.0;
        double dw = w1 - w0;

        for (int y = y_lo; y <= y_hi; ++y) {
            double py = y + 0.5;
            std::uint8_t* row =
                out.mask.data() + static_cast<std::size_t>(y) * camera.width;
            for (int x = x_lo; x <= x_hi; ++x) {
                double px = x + 0.5;
                double rel_u = px - u0;
                double rel_v = py - v0;
                double t = std::clamp((rel_u * du + rel_v * dv) * inv_len2, 0.0, 1.0);
                double off_u = rel_u - t * du;
                double off_v = rel_v - t * dv;
                double w = w0 + t * dw;
                if (off_u * off_u + off_v * off_v <= w * w) row[x] = 1;
            }
        }
    }
}

SilhouetteImage render_silhouette(const Camera& camera, const Skeleton& skeleton,
                                  const FleshModel& flesh, const PoseVector& pose) {
    SilhouetteImage out;
    render_silhouette_into(camera, skeleton, flesh, pose, out);
    return out;
}

void render_silhouette_into(const Camera& camera, const Skeleton& skeleton,
                            const FleshModel& flesh, const PoseVector& pose,
                            SilhouetteImage& out) {
    std::vector<CapsuleSegment> segments = pose_segments(skeleton, flesh, pose);
    render_segments_into(camera, segments, out);
}

}  // namespace mocap
