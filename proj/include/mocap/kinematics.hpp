#pragma once

#include <optional>
#include <vector>

#include "mocap/errors.hpp"
#include "mocap/skeleton.hpp"
#include "mocap/types.hpp"

namespace mocap {

/// One out-of-range entry found while checking a pose against joint limits.
struct LimitViolation {
    int dof = 0;
    double value = 0.0;
    double min_value = 0.0;
    double max_value = 0.0;
};

/// Raised when a pose fails its joint-limit check. Carries the first offender.
class PoseLimitError : public Error {
public:
    PoseLimitError(const Skeleton& skeleton, const LimitViolation& v);
    LimitViolation violation;
};

/// Returns the first limit violation in `pose`, or nullopt if all entries are
/// within their inclusive [min, max] ranges.
std::optional<LimitViolation> find_limit_violation(const Skeleton& skeleton,
                                                   const PoseVector& pose);

/// Throws PoseLimitError if any entry of `pose` is outside its limits.
void validate_pose(const Skeleton& skeleton, const PoseVector& pose);

/// Returns `pose` with every entry clamped into its inclusive limit range.
PoseVector clamp_pose(const Skeleton& skeleton, const PoseVector& pose);

/// Computes world positions of all joints for a validated pose.
///
/// The root position is its rest offset plus the translation dofs; each
/// joint's rotation dofs compose intrinsically in table order, and children
/// inherit the accumulated parent frame. Throws PoseLimitError on an
/// out-of-limit pose.
JointPositions forward_kinematics(const Skeleton& skeleton, const PoseVector& pose);

/// Expands `pose` into a deterministic grid over the listed dofs.
///
/// Each dof in `dims` takes `levels` values spaced `step` apart and centered
/// on its current value; the result is the full Cartesian product in odometer
/// order (last listed dof varies fastest), so it always contains exactly
/// levels^|dims| poses and the middle one equals the input. Values are
/// clamped to the dof limits, which can make neighboring grid points
/// coincide near a limit; duplicates are kept so the count stays fixed.
/// `levels` must be odd and positive, `step` positive, and `dims` free of
/// repeats.
std::vector<PoseVector> expand_interval(const PoseVector& pose,
                                        const std::vector<int>& dims, double step,
                                        int levels, const Skeleton& skeleton);

}  // namespace mocap
