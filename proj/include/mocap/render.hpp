#pragma once

#include <span>
#include <vector>

#include "mocap/camera.hpp"
#include "mocap/image.hpp"
#include "mocap/skeleton.hpp"
#include "mocap/types.hpp"

namespace mocap {

/// A body segment as a capsule: a line between two joint centers with a
/// constant flesh radius.
struct CapsuleSegment {
    Vec3 p0 = Vec3::Zero();
    Vec3 p1 = Vec3::Zero();
    double radius = 0.0;
};

/// Builds the renderable capsules for a pose: one per rendered skeleton
/// segment, endpoints from forward kinematics, radii from the flesh model.
std::vector<CapsuleSegment> pose_segments(const Skeleton& skeleton,
                                          const FleshModel& flesh,
                                          const PoseVector& pose);

/// Rasterizes capsules into a binary mask.
///
/// Each capsule projects to a 2D stadium: endpoint disks whose half-widths
/// are focal * radius / depth, joined by linearly interpolated width along
/// the projected axis. A pixel is foreground when its center lies inside any
/// stadium (boundary inclusive). Segments with an endpoint at or behind the
/// camera (depth below 1e-6) are skipped.
SilhouetteImage render_segments(const Camera& camera,
                                std::span<const CapsuleSegment> segments);
void render_segments_into(const Camera& camera,
                          std::span<const CapsuleSegment> segments,
                          SilhouetteImage& out);

/// Full model rendering: forward kinematics, flesh radii, rasterization.
SilhouetteImage render_silhouette(const Camera& camera, const Skeleton& skeleton,
                                  const FleshModel& flesh, const PoseVector& pose);
void render_silhouette_into(const Camera& camera, const Skeleton& skeleton,
                            const FleshModel& flesh, const PoseVector& pose,
                            SilhouetteImage& out);

}  // namespace mocap
