#include "mocap/trajectory.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mocap/errors.hpp"

namespace mocap {

namespace {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<std::string> expected_header(const Skeleton& skeleton) {
    std::vector<std::string> cols{"frame", "time_s"};
    for (const Dof& d : skeleton.dofs)
        cols.push_back(d.kind == DofKind::Rotation ? d.name + "_deg" : d.name + "_m");
    for (const Joint& j : skeleton.joints)
        for (const char* axis : {"_x", "_y", "_z"}) cols.push_back(j.name + axis);
    cols.push_back("weight");
    return cols;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

double parse_double(const std::string& field, const std::string& path, int line_no) {
    char* end = nullptr;
    double v = std::strtod(field.c_str(), &end);
    if (end == field.c_str() || *end != '\0')
        throw IoError("trajectory: '" + path + "' line " + std::to_string(line_no) +
                      ": bad number '" + field + "'");
    return v;
}

}  // namespace

void write_trajectory_csv(const Trajectory& trajectory, const Skeleton& skeleton,
                          const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("trajectory: cannot write '" + path + "'");

    const std::vector<std::string> header = expected_header(skeleton);
    for (std::size_t i = 0; i < header.size(); ++i)
        out << (i ? "," : "") << header[i];
    out << "\n";

    const double dt = trajectory.frame_period_s();
    for (std::size_t f = 0; f < trajectory.frames.size(); ++f) {
        const TrajectoryFrame& frame = trajectory.frames[f];
        out << f << "," << format_double(static_cast<double>(f) * dt);
        for (int d = 0; d < kNumDofs; ++d) {
            double v = frame.pose[d];
            if (skeleton.dofs[static_cast<std::size_t>(d)].kind == DofKind::Rotation)
                v = rad_to_deg(v);
            out << "," << format_double(v);
        }
        for (int j = 0; j < kNumJoints; ++j)
            out << "," << format_double(frame.joints[j].x()) << ","
                << format_double(frame.joints[j].y()) << ","
                << format_double(frame.joints[j].z());
        out << "," << format_double(frame.weight) << "\n";
    }
    if (!out) throw IoError("trajectory: write failed for '" + path + "'");
}

Trajectory read_trajectory_csv(const Skeleton& skeleton, const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("trajectory: cannot open '" + path + "'");

    std::string line;
    if (!std::getline(in, line))
        throw IoError("trajectory: '" + path + "' is empty");
    const std::vector<std::string> header = expected_header(skeleton);
    std::vector<std::string> found = split_csv_line(line);
    if (found != header)
        throw IoError("trajectory: '" + path +
                      "' header does not match this skeleton's column layout");

    Trajectory trajectory;
    std::vector<double> times;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() != header.size())
            throw IoError("trajectory: '" + path + "' line " + std::to_string(line_no) +
                          ": expected " + std::to_string(header.size()) +
                          " fields, got " + std::to_string(fields.size()));
        TrajectoryFrame frame;
        std::size_t col = 1;
        times.push_back(parse_double(fields[col++], path, line_no));
        for (int d = 0; d < kNumDofs; ++d) {
            double v = parse_double(fields[col++], path, line_no);
            if (skeleton.dofs[static_cast<std::size_t>(d)].kind == DofKind::Rotation)
                v = deg_to_rad(v);
            frame.pose[d] = v;
        }
        for (int j = 0; j < kNumJoints; ++j) {
            double x = parse_double(fields[col++], path, line_no);
            double y = parse_double(fields[col++], path, line_no);
            double z = parse_double(fields[col++], path, line_no);
            frame.joints[j] = Vec3(x, y, z);
        }
        frame.weight = parse_double(fields[col++], path, line_no);
        trajectory.frames.push_back(frame);
    }
    if (times.size() >= 2 && times[1] > times[0])
        trajectory.frame_rate_hz = 1.0 / (times[1] - times[0]);
    return trajectory;
}

void write_trajectory_json(const Trajectory& trajectory, const Skeleton& skeleton,
                           const std::string& path) {
    nlohmann::json j;
    j["frame_rate_hz"] = trajectory.frame_rate_hz;
    nlohmann::json dof_names = nlohmann::json::array();
    for (const Dof& d : skeleton.dofs) dof_names.push_back(d.name);
    j["dof_names"] = std::move(dof_names);
    nlohmann::json joint_names = nlohmann::json::array();
    for (const Joint& joint : skeleton.joints) joint_names.push_back(joint.name);
    j["joint_names"] = std::move(joint_names);

    const double dt = trajectory.frame_period_s();
    nlohmann::json frames = nlohmann::json::array();
    for (std::size_t f = 0; f < trajectory.frames.size(); ++f) {
        const TrajectoryFrame& frame = trajectory.frames[f];
        nlohmann::json pose = nlohmann::json::array();
        for (int d = 0; d < kNumDofs; ++d) {
            double v = frame.pose[d];
            if (skeleton.dofs[static_cast<std::size_t>(d)].kind == DofKind::Rotation)
                v = rad_to_deg(v);
            pose.push_back(v);
        }
        nlohmann::json joints = nlohmann::json::array();
        for (int jo = 0; jo < kNumJoints; ++jo)
            joints.push_back({frame.joints[jo].x(), frame.joints[jo].y(),
                              frame.joints[jo].z()});
        frames.push_back({{"frame", f},
                          {"time_s", static_cast<double>(f) * dt},
                          {"pose", std::move(pose)},
                          {"joints", std::move(joints)},
                          {"weight", frame.weight}});
    }
    j["frames"] = std::move(frames);

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("trajectory: cannot write '" + path + "'");
    out << j.dump(2) << "\n";
    if (!out) throw IoError("trajectory: write failed for '" + path + "'");
}

}  // namespace mocap
