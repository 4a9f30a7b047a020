#include "mocap/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mocap {

namespace {

std::string describe_violation(const Skeleton& skeleton, const LimitViolation& v) {
    const Dof& d = skeleton.dofs[static_cast<std::size_t>(v.dof)];
    return "pose: dof '" + d.name + "' = " + std::to_string(v.value) +
           " outside [" + std::to_string(v.min_value) + ", " +
           std::to_string(v.max_value) + "]";
}

}  // namespace

PoseLimitError::PoseLimitError(const Skeleton& skeleton, const LimitViolation& v)
    : Error(describe_violation(skeleton, v)), violation(v) {}

std::optional<LimitViolation> find_limit_violation(const Skeleton& skeleton,
                                                   const PoseVector& pose) {
    for (int i = 0; i < kNumDofs; ++i) {
        const Dof& d = skeleton.dofs[static_cast<std::size_t>(i)];
        double v = pose[i];
        if (v < d.min_value || v > d.max_value)
            return LimitViolation{i, v, d.min_value, d.max_value};
    }
    return std::nullopt;
}

void validate_pose(const Skeleton& skeleton, const PoseVector& pose) {
    if (auto v = find_limit_violation(skeleton, pose))
        throw PoseLimitError(skeleton, *v);
}

PoseVector clamp_pose(const Skeleton& skeleton, const PoseVector& pose) {
    PoseVector out = pose;
    for (int i = 0; i < kNumDofs; ++i) {
        const Dof& d = skeleton.dofs[static_cast<std::size_t>(i)];
        out[i] = std::clamp(out[i], d.min_value, d.max_value);
    }
    return out;
}

JointPositions forward_kinematics(const Skeleton& skeleton, const PoseVector& pose) {
    validate_pose(skeleton, pose);

    JointPositions out;
    std::array<Mat3, kNumJoints> world_rot;

    // Rotation dofs grouped by owner, preserving table order within a joint.
    std::array<Mat3, kNumJoints> local_rot;
    local_rot.fill(Mat3::Identity());
    Vec3 root_translation = Vec3::Zero();
    for (int i = 0; i < kNumDofs; ++i) {
        const Dof& d = skeleton.dofs[static_cast<std::size_t>(i)];
        if (d.kind == DofKind::Translation) {
            root_translation += pose[i] * d.axis;
        } else {
            auto j = static_cast<std::size_t>(d.joint);
            local_rot[j] = local_rot[j] * Eigen::AngleAxisd(pose[i], d.axis).toRotationMatrix();
        }
    }

    for (int i = 0; i < kNumJoints; ++i) {
        auto idx = static_cast<std::size_t>(i);
        const Joint& joint = skeleton.joints[idx];
        if (joint.parent < 0) {
            world_rot[idx] = local_rot[idx];
            out[i] = joint.offset + root_translation;
        } else {
            auto p = static_cast<std::size_t>(joint.parent);
            world_rot[idx] = world_rot[p] * local_rot[idx];
            out[i] = out[joint.parent] + world_rot[p] * joint.offset;
        }
    }
    return out;
}

std::vector<PoseVector> expand_interval(const PoseVector& pose,
                                        const std::vector<int>& dims, double step,
                                        int levels, const Skeleton& skeleton) {
    if (levels <= 0 || levels % 2 == 0)
        throw ConfigError("expand: levels must be odd and positive, got " +
                          std::to_string(levels));
    if (!(step > 0.0)) throw ConfigError("expand: step must be positive");
    for (std::size_t a = 0; a < dims.size(); ++a) {
        if (dims[a] < 0 || dims[a] >= kNumDofs)
            throw ConfigError("expand: dof index " + std::to_string(dims[a]) +
                              " out of range");
        for (std::size_t b = a + 1; b < dims.size(); ++b)
            if (dims[a] == dims[b])
                throw ConfigError("expand: repeated dof index " +
                                  std::to_string(dims[a]));
    }

    std::size_t count = 1;
    for (std::size_t i = 0; i < dims.size(); ++i) count *= static_cast<std::size_t>(levels);

    int half = (levels - 1) / 2;
    std::vector<PoseVector> out;
    out.reserve(count);
    std::vector<int> ticks(dims.size(), 0);  // per-dim level index, 0..levels-1
    for (std::size_t n = 0; n < count; ++n) {
        PoseVector p = pose;
        for (std::size_t d = 0; d < dims.size(); ++d) {
            const Dof& dof = skeleton.dofs[static_cast<std::size_t>(dims[d])];
            double v = pose[dims[d]] + (ticks[d] - half) * step;
            p[dims[d]] = std::clamp(v, dof.min_value, dof.max_value);
        }
        out.push_back(std::move(p));
        for (std::size_t d = dims.size(); d-- > 0;) {  // last listed dim fastest
            if (++ticks[d] < levels) break;
            ticks[d] = 0;
        }
    }
    return out;
}

}  // namespace mocap
