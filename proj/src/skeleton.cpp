#include "mocap/skeleton.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mocap/errors.hpp"

namespace mocap {

using nlohmann::json;

int Skeleton::joint_index(const std::string& name) const {
    for (std::size_t i = 0; i < joints.size(); ++i)
        if (joints[i].name == name) return static_cast<int>(i);
    return -1;
}

int Skeleton::dof_index(const std::string& name) const {
    for (std::size_t i = 0; i < dofs.size(); ++i)
        if (dofs[i].name == name) return static_cast<int>(i);
    return -1;
}

std::vector<int> Skeleton::joint_rotation_dofs(int joint) const {
    std::vector<int> out;
    for (std::size_t i = 0; i < dofs.size(); ++i)
        if (dofs[i].joint == joint && dofs[i].kind == DofKind::Rotation)
            out.push_back(static_cast<int>(i));
    return out;
}

double Skeleton::segment_rest_length(int s) const {
    const auto& [parent, child] = rendered_segments[static_cast<std::size_t>(s)];
    (void)parent;
    return joints[static_cast<std::size_t>(child)].offset.norm();
}

void Skeleton::validate() const {
    if (joints.size() != kNumJoints)
        throw ConfigError("skeleton: expected " + std::to_string(kNumJoints) +
                          " joints, got " + std::to_string(joints.size()));
    if (joints[0].parent != -1 || joints[0].name != "sacrum")
        throw ConfigError("skeleton: joint 0 must be the sacrum root");

    std::set<std::string> names;
    for (std::size_t i = 0; i < joints.size(); ++i) {
        const Joint& j = joints[i];
        if (!names.insert(j.name).second)
            throw ConfigError("skeleton: duplicate joint name '" + j.name + "'");
        if (i == 0) continue;
        if (j.parent < 0 || j.parent >= static_cast<int>(i))
            throw ConfigError("skeleton: joint '" + j.name +
                              "' must list an earlier joint as parent");
    }

    if (rendered_segments.size() != kNumSegments)
        throw ConfigError("skeleton: expected " + std::to_string(kNumSegments) +
                          " rendered segments, got " +
                          std::to_string(rendered_segments.size()));
    std::set<std::pair<int, int>> seen;
    for (const auto& [parent, child] : rendered_segments) {
        if (child <= 0 || child >= static_cast<int>(joints.size()))
            throw ConfigError("skeleton: rendered segment child out of range");
        if (joints[static_cast<std::size_t>(child)].parent != parent)
            throw ConfigError("skeleton: rendered segment (" + std::to_string(parent) +
                              ", " + std::to_string(child) + ") is not a parent link");
        if (!seen.insert({parent, child}).second)
            throw ConfigError("skeleton: duplicate rendered segment");
    }

    if (dofs.size() != kNumDofs)
        throw ConfigError("skeleton: expected " + std::to_string(kNumDofs) +
                          " dofs, got " + std::to_string(dofs.size()));
    std::set<std::string> dof_names;
    int root_translations = 0;
    int root_rotations = 0;
    for (const Dof& d : dofs) {
        if (!dof_names.insert(d.name).second)
            throw ConfigError("skeleton: duplicate dof name '" + d.name + "'");
        if (d.joint < 0 || d.joint >= static_cast<int>(joints.size()))
            throw ConfigError("skeleton: dof '" + d.name + "' owner joint out of range");
        if (!(d.min_value < d.max_value))
            throw ConfigError("skeleton: dof '" + d.name + "' needs min < max");
        if (std::abs(d.axis.norm() - 1.0) > 1e-9)
            throw ConfigError("skeleton: dof '" + d.name + "' axis must be unit length");
        if (d.kind == DofKind::Translation) {
            if (d.joint != 0)
                throw ConfigError("skeleton: translation dof '" + d.name +
                                  "' must be owned by the root");
            ++root_translations;
        } else if (d.joint == 0) {
            ++root_rotations;
        }
    }
    if (root_translations != 3)
        throw ConfigError("skeleton: root must own exactly 3 translation dofs");
    if (root_rotations != 3)
        throw ConfigError("skeleton: root must own exactly 3 rotation dofs");

    // The four limb chains must exist as root-to-leaf paths.
    for (const char* leaf : {"l_wrist", "r_wrist", "l_toe", "r_toe"}) {
        int idx = joint_index(leaf);
        if (idx < 0) throw ConfigError(std::string("skeleton: missing joint '") + leaf + "'");
        for (const Joint& j : joints)
            if (j.parent == idx)
                throw ConfigError(std::string("skeleton: '") + leaf + "' must be a leaf");
    }
    for (const char* required :
         {"thorax", "neck", "head", "l_shoulder", "r_shoulder", "l_elbow", "r_elbow",
          "l_hip", "r_hip", "l_knee", "r_knee", "l_ankle", "r_ankle"}) {
        if (joint_index(required) < 0)
            throw ConfigError(std::string("skeleton: missing joint '") + required + "'");
    }
}

double Skeleton::standing_root_height() const {
    // Zero pose has identity rotations, so positions are cumulative offsets.
    std::vector<Vec3> pos(joints.size());
    double min_z = 0.0;
    for (std::size_t i = 0; i < joints.size(); ++i) {
        pos[i] = joints[i].parent < 0
                     ? joints[i].offset
                     : pos[static_cast<std::size_t>(joints[i].parent)] + joints[i].offset;
        min_z = std::min(min_z, pos[i].z());
    }
    return -min_z;
}

namespace {

struct JointSpec {
    const char* name;
    const char* parent;
    double x, y, z;  // fractions of body height
};

// Rest pose: standing upright, arms hanging, feet forward (+x), z up.
// Offsets are Drillis-Contini style fractions of body height.
constexpr JointSpec kJointTable[kNumJoints] = {
    {"sacrum", "", 0.0, 0.0, 0.0},
    {"thorax", "sacrum", 0.0, 0.0, 0.100},
    {"neck", "thorax", 0.0, 0.0, 0.220},
    {"head", "neck", 0.0, 0.0, 0.065},
    {"head_top", "head", 0.0, 0.0, 0.065},
    {"l_shoulder", "thorax", 0.0, 0.129, 0.168},
    {"l_elbow", "l_shoulder", 0.0, 0.0, -0.186},
    {"l_wrist", "l_elbow", 0.0, 0.0, -0.146},
    {"r_shoulder", "thorax", 0.0, -0.129, 0.168},
    {"r_elbow", "r_shoulder", 0.0, 0.0, -0.186},
    {"r_wrist", "r_elbow", 0.0, 0.0, -0.146},
    {"l_hip", "sacrum", 0.0, 0.052, -0.020},
    {"l_knee", "l_hip", 0.0, 0.0, -0.245},
    {"l_ankle", "l_knee", 0.0, 0.0, -0.246},
    {"l_toe", "l_ankle", 0.120, 0.0, -0.030},
    {"r_hip", "sacrum", 0.0, -0.052, -0.020},
    {"r_knee", "r_hip", 0.0, 0.0, -0.245},
    {"r_ankle", "r_knee", 0.0, 0.0, -0.246},
    {"r_toe", "r_ankle", 0.120, 0.0, -0.030},
};

struct SegmentSpec {
    const char* parent;
    const char* child;
    double radius;  // meters at 1.75 m body height
};

constexpr SegmentSpec kSegmentTable[kNumSegments] = {
    {"thorax", "neck", 0.130},      // torso
    {"neck", "head", 0.050},
    {"head", "head_top", 0.090},
    {"thorax", "l_shoulder", 0.060},
    {"l_shoulder", "l_elbow", 0.045},
    {"l_elbow", "l_wrist", 0.040},
    {"thorax", "r_shoulder", 0.060},
    {"r_shoulder", "r_elbow", 0.045},
    {"r_elbow", "r_wrist", 0.040},
    {"sacrum", "l_hip", 0.080},
    {"l_hip", "l_knee", 0.070},
    {"l_knee", "l_ankle", 0.055},
    {"l_ankle", "l_toe", 0.040},
    {"sacrum", "r_hip", 0.080},
    {"r_hip", "r_knee", 0.070},
    {"r_knee", "r_ankle", 0.055},
    {"r_ankle", "r_toe", 0.040},
};

struct DofSpec {
    const char* name;
    const char* joint;
    DofKind kind;
    double ax, ay, az;
    double min_value;  // meters or degrees
    double max_value;
};

// Axis signs are chosen so that positive flexion moves the limb forward
// (+x) and positive abduction moves it away from the midline on both sides.
// Within a joint the listed order is the intrinsic composition order.
const DofSpec kDofTable[kNumDofs] = {
    {"root_tx", "sacrum", DofKind::Translation, 1, 0, 0, -10.0, 10.0},
    {"root_ty", "sacrum", DofKind::Translation, 0, 1, 0, -10.0, 10.0},
    {"root_tz", "sacrum", DofKind::Translation, 0, 0, 1, 0.0, 2.0},
    {"root_rx", "sacrum", DofKind::Rotation, 1, 0, 0, -45, 45},
    {"root_ry", "sacrum", DofKind::Rotation, 0, 1, 0, -45, 45},
    {"root_rz", "sacrum", DofKind::Rotation, 0, 0, 1, -180, 180},
    {"trunk_flex", "thorax", DofKind::Rotation, 0, 1, 0, -30, 75},
    {"trunk_lat", "thorax", DofKind::Rotation, 1, 0, 0, -35, 35},
    {"trunk_rot", "thorax", DofKind::Rotation, 0, 0, 1, -40, 40},
    {"neck_flex", "neck", DofKind::Rotation, 0, 1, 0, -50, 60},
    {"neck_lat", "neck", DofKind::Rotation, 1, 0, 0, -45, 45},
    {"l_sho_flex", "l_shoulder", DofKind::Rotation, 0, -1, 0, -60, 180},
    {"l_sho_abd", "l_shoulder", DofKind::Rotation, 1, 0, 0, -40, 180},
    {"l_sho_rot", "l_shoulder", DofKind::Rotation, 0, 0, 1, -90, 90},
    {"r_sho_flex", "r_shoulder", DofKind::Rotation, 0, -1, 0, -60, 180},
    {"r_sho_abd", "r_shoulder", DofKind::Rotation, -1, 0, 0, -40, 180},
    {"r_sho_rot", "r_shoulder", DofKind::Rotation, 0, 0, 1, -90, 90},
    {"l_elbow_flex", "l_elbow", DofKind::Rotation, 0, -1, 0, 0, 150},
    {"r_elbow_flex", "r_elbow", DofKind::Rotation, 0, -1, 0, 0, 150},
    {"l_hip_flex", "l_hip", DofKind::Rotation, 0, -1, 0, -30, 60},
    {"l_hip_abd", "l_hip", DofKind::Rotation, 1, 0, 0, -30, 45},
    {"l_hip_rot", "l_hip", DofKind::Rotation, 0, 0, 1, -40, 40},
    {"r_hip_flex", "r_hip", DofKind::Rotation, 0, -1, 0, -30, 60},
    {"r_hip_abd", "r_hip", DofKind::Rotation, -1, 0, 0, -30, 45},
    {"r_hip_rot", "r_hip", DofKind::Rotation, 0, 0, 1, -40, 40},
    {"l_knee_flex", "l_knee", DofKind::Rotation, 0, 1, 0, 0, 150},
    {"r_knee_flex", "r_knee", DofKind::Rotation, 0, 1, 0, 0, 150},
    {"l_ankle_flex", "l_ankle", DofKind::Rotation, 0, -1, 0, -50, 30},
    {"l_ankle_rot", "l_ankle", DofKind::Rotation, 1, 0, 0, -30, 30},
    {"r_ankle_flex", "r_ankle", DofKind::Rotation, 0, -1, 0, -50, 30},
    {"r_ankle_rot", "r_ankle", DofKind::Rotation, -1, 0, 0, -30, 30},
};

}  // namespace

Skeleton Skeleton::default_skeleton(double body_height) {
    if (!(body_height > 0.0))
        throw ConfigError("skeleton: body height must be positive");
    Skeleton s;
    s.body_height = body_height;
    s.joints.reserve(kNumJoints);
    for (const JointSpec& spec : kJointTable) {
        Joint j;
        j.name = spec.name;
        j.parent = spec.parent[0] == '\0' ? -1 : s.joint_index(spec.parent);
        j.offset = Vec3(spec.x, spec.y, spec.z) * body_height;
        s.joints.push_back(std::move(j));
    }
    s.rendered_segments.reserve(kNumSegments);
    for (const SegmentSpec& spec : kSegmentTable)
        s.rendered_segments.emplace_back(s.joint_index(spec.parent),
                                         s.joint_index(spec.child));
    s.dofs.reserve(kNumDofs);
    for (const DofSpec& spec : kDofTable) {
        Dof d;
        d.name = spec.name;
        d.joint = s.joint_index(spec.joint);
        d.kind = spec.kind;
        d.axis = Vec3(spec.ax, spec.ay, spec.az);
        if (spec.kind == DofKind::Translation) {
            d.min_value = spec.min_value;
            d.max_value = spec.max_value;
        } else {
            d.min_value = deg_to_rad(spec.min_value);
            d.max_value = deg_to_rad(spec.max_value);
        }
        s.dofs.push_back(std::move(d));
    }
    s.validate();
    return s;
}

FleshModel FleshModel::default_flesh(double body_height) {
    if (!(body_height > 0.0))
        throw ConfigError("flesh: body height must be positive");
    FleshModel f;
    for (int i = 0; i < kNumSegments; ++i)
        f.radii[static_cast<std::size_t>(i)] = kSegmentTable[i].radius * body_height / 1.75;
    return f;
}

PoseVector standing_pose(const Skeleton& skeleton) {
    PoseVector pose;
    int tz = skeleton.dof_index("root_tz");
    if (tz >= 0) pose[tz] = skeleton.standing_root_height();
    return pose;
}

std::string skeleton_to_json(const Skeleton& skeleton, const FleshModel& flesh) {
    json j;
    j["body_height_m"] = skeleton.body_height;
    json joints = json::array();
    for (const Joint& joint : skeleton.joints) {
        joints.push_back({
            {"name", joint.name},
            {"parent", joint.parent < 0
                           ? ""
                           : skeleton.joints[static_cast<std::size_t>(joint.parent)].name},
            {"offset_m", {joint.offset.x(), joint.offset.y(), joint.offset.z()}},
        });
    }
    j["joints"] = std::move(joints);
    json segments = json::array();
    for (std::size_t s = 0; s < skeleton.rendered_segments.size(); ++s) {
        const auto& [parent, child] = skeleton.rendered_segments[s];
        segments.push_back({
            {"parent", skeleton.joints[static_cast<std::size_t>(parent)].name},
            {"child", skeleton.joints[static_cast<std::size_t>(child)].name},
            {"radius_m", flesh.radii[s]},
        });
    }
    j["rendered_segments"] = std::move(segments);
    json dofs = json::array();
    for (const Dof& d : skeleton.dofs) {
        json entry = {
            {"name", d.name},
            {"joint", skeleton.joints[static_cast<std::size_t>(d.joint)].name},
            {"axis", {d.axis.x(), d.axis.y(), d.axis.z()}},
        };
        if (d.kind == DofKind::Translation) {
            entry["kind"] = "translation";
            entry["min_m"] = d.min_value;
            entry["max_m"] = d.max_value;
        } else {
            entry["kind"] = "rotation";
            entry["min_deg"] = rad_to_deg(d.min_value);
            entry["max_deg"] = rad_to_deg(d.max_value);
        }
        dofs.push_back(std::move(entry));
    }
    j["dofs"] = std::move(dofs);
    return j.dump(2) + "\n";
}

std::pair<Skeleton, FleshModel> skeleton_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw IoError(std::string("skeleton: invalid JSON: ") + e.what());
    }
    try {
        Skeleton s;
        s.body_height = j.value("body_height_m", 1.75);
        for (const json& joint_j : j.at("joints")) {
            Joint joint;
            joint.name = joint_j.at("name").get<std::string>();
            std::string parent = joint_j.at("parent").get<std::string>();
            joint.parent = parent.empty() ? -1 : s.joint_index(parent);
            if (!parent.empty() && joint.parent < 0)
                throw IoError("skeleton: joint '" + joint.name +
                              "' references unknown parent '" + parent +
                              "' (parents must be listed first)");
            const json& off = joint_j.at("offset_m");
            joint.offset = Vec3(off.at(0).get<double>(), off.at(1).get<double>(),
                                off.at(2).get<double>());
            s.joints.push_back(std::move(joint));
        }
        FleshModel flesh;
        std::size_t seg_index = 0;
        for (const json& seg_j : j.at("rendered_segments")) {
            int parent = s.joint_index(seg_j.at("parent").get<std::string>());
            int child = s.joint_index(seg_j.at("child").get<std::string>());
            if (parent < 0 || child < 0)
                throw IoError("skeleton: rendered segment references unknown joint");
            s.rendered_segments.emplace_back(parent, child);
            double radius = seg_j.at("radius_m").get<double>();
            if (!(radius > 0.0))
                throw IoError("skeleton: segment radius must be positive");
            if (seg_index < flesh.radii.size()) flesh.radii[seg_index] = radius;
            ++seg_index;
        }
        for (const json& dof_j : j.at("dofs")) {
            Dof d;
            d.name = dof_j.at("name").get<std::string>();
            d.joint = s.joint_index(dof_j.at("joint").get<std::string>());
            if (d.joint < 0)
                throw IoError("skeleton: dof '" + d.name + "' references unknown joint");
            const json& axis = dof_j.at("axis");
            d.axis = Vec3(axis.at(0).get<double>(), axis.at(1).get<double>(),
                          axis.at(2).get<double>());
            std::string kind = dof_j.at("kind").get<std::string>();
            if (kind == "translation") {
                d.kind = DofKind::Translation;
                d.min_value = dof_j.at("min_m").get<double>();
                d.max_value = dof_j.at("max_m").get<double>();
            } else if (kind == "rotation") {
                d.kind = DofKind::Rotation;
                d.min_value = deg_to_rad(dof_j.at("min_deg").get<double>());
                d.max_value = deg_to_rad(dof_j.at("max_deg").get<double>());
            } else {
                throw IoError("skeleton: dof '" + d.name + "' has unknown kind '" +
                              kind + "'");
            }
            s.dofs.push_back(std::move(d));
        }
        s.validate();
        return {std::move(s), flesh};
    } catch (const json::exception& e) {
        throw IoError(std::string("skeleton: malformed definition: ") + e.what());
    }
}

std::pair<Skeleton, FleshModel> load_skeleton_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("skeleton: cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return skeleton_from_json(buffer.str());
}

void save_skeleton_file(const Skeleton& skeleton, const FleshModel& flesh,
                        const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("skeleton: cannot write '" + path + "'");
    out << skeleton_to_json(skeleton, flesh);
    if (!out) throw IoError("skeleton: write failed for '" + path + "'");
}

}  // namespace mocap
