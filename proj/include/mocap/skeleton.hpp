#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "mocap/types.hpp"

namespace mocap {

/// One node of the articulated body. `offset` is the rest-pose translation
/// from the parent joint, expressed in the parent's frame (meters). The root
/// has parent == -1 and a zero offset.
struct Joint {
    std::string name;
    int parent = -1;
    Vec3 offset = Vec3::Zero();
};

enum class DofKind { Translation, Rotation };

/// One degree of freedom: a translation (root only) or a rotation about a
/// fixed axis in the owning joint's local frame. Limits are meters for
/// translations and radians for rotations; both bounds are inclusive.
struct Dof {
    std::string name;
    int joint = 0;
    DofKind kind = DofKind::Rotation;
    Vec3 axis = Vec3::UnitZ();
    double min_value = 0.0;
    double max_value = 0.0;
};

/// The 19-joint articulated body model.
///
/// Joints form a single tree rooted at the sacrum, stored parent-before-child.
/// 17 of the 18 parent links carry flesh volumes and are listed in
/// `rendered_segments`; the sacrum->thorax interior link is structural only.
/// The 31 DOFs are ordered root translation, root rotation, then joint
/// rotations; within a joint the listed order is the intrinsic composition
/// order (flexion, abduction/lateral, axial).
struct Skeleton {
    std::vector<Joint> joints;                          // exactly 19
    std::vector<std::pair<int, int>> rendered_segments; // exactly 17 (parent, child)
    std::vector<Dof> dofs;                              // exactly 31
    double body_height = 1.75;                          // meters, provenance of defaults

    int joint_index(const std::string& name) const;  // -1 if absent
    int dof_index(const std::string& name) const;    // -1 if absent

    /// Rotational DOF indices owned by `joint`, in table order.
    std::vector<int> joint_rotation_dofs(int joint) const;

    /// Rest length of rendered segment `s` (meters).
    double segment_rest_length(int s) const;

    /// Checks every structural invariant; throws ConfigError on violation.
    void validate() const;

    /// Root height that puts the lowest joint of the zero pose on the ground.
    double standing_root_height() const;

    /// The built-in model scaled to `body_height` via anthropometric ratios.
    static Skeleton default_skeleton(double body_height = 1.75);
};

/// Capsule radius for each rendered segment, meters, in segment order.
struct FleshModel {
    std::array<double, kNumSegments> radii{};

    static FleshModel default_flesh(double body_height = 1.75);
};

/// All-zero pose with the root raised to standing height.
PoseVector standing_pose(const Skeleton& skeleton);

/// Skeleton + flesh serialization (JSON; angles in degrees, lengths in meters).
std::string skeleton_to_json(const Skeleton& skeleton, const FleshModel& flesh);
std::pair<Skeleton, FleshModel> skeleton_from_json(const std::string& text);
std::pair<Skeleton, FleshModel> load_skeleton_file(const std::string& path);
void save_skeleton_file(const Skeleton& skeleton, const FleshModel& flesh,
                        const std::string& path);

}  // namespace mocap
