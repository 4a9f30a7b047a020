#include "mocap/config.hpp"

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mocap/errors.hpp"

namespace mocap {

std::vector<std::pair<std::string, std::vector<double>>> default_init_grid() {
    return {
        {"root_tx", {-1.0, -0.5, 0.0, 0.5, 1.0}},
        {"root_ty", {-1.0, -0.5, 0.0, 0.5, 1.0}},
        {"l_hip_flex", {-20.0, 0.0, 20.0}},
        {"r_hip_flex", {-20.0, 0.0, 20.0}},
        {"l_knee_flex", {0.0, 25.0, 50.0}},
        {"r_knee_flex", {0.0, 25.0, 50.0}},
    };
}

namespace {

using J = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& message) {
    throw ConfigError("config: " + path + ": " + message);
}

void check_keys(const J& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* key : allowed)
            if (it.key() == key) {
                known = true;
                break;
            }
        if (!known) fail(path, "unknown key '" + it.key() + "'");
    }
}

const J* find(const J& obj, const char* key) {
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

void read_double(const J& obj, const std::string& path, const char* key, double& out) {
    if (const J* v = find(obj, key)) {
        if (!v->is_number()) fail(path + "." + key, "expected a number");
        out = v->get<double>();
    }
}

void read_int(const J& obj, const std::string& path, const char* key, int& out) {
    if (const J* v = find(obj, key)) {
        if (!v->is_number_integer()) fail(path + "." + key, "expected an integer");
        out = static_cast<int>(v->get<std::int64_t>());
    }
}

void read_u64(const J& obj, const std::string& path, const char* key,
              std::uint64_t& out) {
    if (const J* v = find(obj, key)) {
        if (!v->is_number_integer() || (v->is_number_integer() && !v->is_number_unsigned() &&
                                        v->get<std::int64_t>() < 0))
            fail(path + "." + key, "expected a non-negative integer");
        out = v->get<std::uint64_t>();
    }
}

void read_string(const J& obj, const std::string& path, const char* key,
                 std::string& out) {
    if (const J* v = find(obj, key)) {
        if (!v->is_string()) fail(path + "." + key, "expected a string");
        out = v->get<std::string>();
    }
}

void read_string_list(const J& obj, const std::string& path, const char* key,
                      std::vector<std::string>& out) {
    if (const J* v = find(obj, key)) {
        if (!v->is_array()) fail(path + "." + key, "expected an array of strings");
        out.clear();
        for (const J& entry : *v) {
            if (!entry.is_string()) fail(path + "." + key, "expected an array of strings");
            out.push_back(entry.get<std::string>());
        }
    }
}

Vec3 read_vec3(const J& v, const std::string& path) {
    if (!v.is_array() || v.size() != 3) fail(path, "expected an array of 3 numbers");
    for (const J& e : v)
        if (!e.is_number()) fail(path, "expected an array of 3 numbers");
    return Vec3(v[0].get<double>(), v[1].get<double>(), v[2].get<double>());
}

Camera parse_camera(const J& obj, const std::string& path) {
    if (!obj.is_object()) fail(path, "expected an object");
    check_keys(obj, path,
               {"width", "height", "focal_px", "center_u", "center_v", "rotation",
                "translation", "position", "look_at", "up"});
    Camera cam;
    read_int(obj, path, "width", cam.width);
    read_int(obj, path, "height", cam.height);
    read_double(obj, path, "focal_px", cam.focal_px);
    cam.center_u = cam.width / 2.0;
    cam.center_v = cam.height / 2.0;
    read_double(obj, path, "center_u", cam.center_u);
    read_double(obj, path, "center_v", cam.center_v);

    const bool has_matrix = find(obj, "rotation") || find(obj, "translation");
    const bool has_look = find(obj, "position") || find(obj, "look_at") || find(obj, "up");
    if (has_matrix && has_look)
        fail(path, "give either rotation/translation or position/look_at, not both");
    if (has_matrix) {
        const J* rot = find(obj, "rotation");
        const J* trans = find(obj, "translation");
        if (!rot || !trans) fail(path, "rotation and translation must appear together");
        if (!rot->is_array() || rot->size() != 3)
            fail(path + ".rotation", "expected 3 rows of 3 numbers");
        for (int r = 0; r < 3; ++r) {
            Vec3 row = read_vec3((*rot)[static_cast<std::size_t>(r)],
                                 path + ".rotation[" + std::to_string(r) + "]");
            cam.rotation.row(r) = row;
        }
        cam.translation = read_vec3(*trans, path + ".translation");
    } else if (has_look) {
        const J* pos = find(obj, "position");
        const J* target = find(obj, "look_at");
        if (!pos || !target) fail(path, "position and look_at must appear together");
        Vec3 up(0, 0, 1);
        if (const J* u = find(obj, "up")) up = read_vec3(*u, path + ".up");
        Camera placed = Camera::look_at(cam.width, cam.height, cam.focal_px,
                                        read_vec3(*pos, path + ".position"),
                                        read_vec3(*target, path + ".look_at"), up);
        placed.center_u = cam.center_u;
        placed.center_v = cam.center_v;
        cam = placed;
    }
    try {
        cam.validate();
    } catch (const ConfigError& e) {
        fail(path, e.what());
    }
    return cam;
}

IpfSection parse_ipf(const J& obj, const std::string& path) {
    if (!obj.is_object()) fail(path, "expected an object");
    check_keys(obj, path,
               {"interesting_dofs", "grid_step_deg", "grid_levels", "m_selected",
                "rng_seed", "noise_sigma_deg", "noise_sigma_m", "noise_sigma_overrides",
                "init_grid"});
    IpfSection s;
    read_string_list(obj, path, "interesting_dofs", s.interesting_dofs);
    read_double(obj, path, "grid_step_deg", s.grid_step_deg);
    read_int(obj, path, "grid_levels", s.grid_levels);
    read_int(obj, path, "m_selected", s.m_selected);
    read_u64(obj, path, "rng_seed", s.rng_seed);
    read_double(obj, path, "noise_sigma_deg", s.noise_sigma_deg);
    read_double(obj, path, "noise_sigma_m", s.noise_sigma_m);
    if (const J* overrides = find(obj, "noise_sigma_overrides")) {
        if (!overrides->is_object())
            fail(path + ".noise_sigma_overrides", "expected an object of dof: sigma");
        s.noise_sigma_overrides.clear();
        for (auto it = overrides->begin(); it != overrides->end(); ++it) {
            if (!it.value().is_number())
                fail(path + ".noise_sigma_overrides." + it.key(), "expected a number");
            s.noise_sigma_overrides.emplace_back(it.key(), it.value().get<double>());
        }
    }
    if (const J* grid = find(obj, "init_grid")) {
        if (!grid->is_object())
            fail(path + ".init_grid", "expected an object of dof: value list");
        s.init_grid.clear();
        for (auto it = grid->begin(); it != grid->end(); ++it) {
            const std::string entry_path = path + ".init_grid." + it.key();
            if (!it.value().is_array() || it.value().empty())
                fail(entry_path, "expected a non-empty array of numbers");
            std::vector<double> values;
            for (const J& v : it.value()) {
                if (!v.is_number()) fail(entry_path, "expected a non-empty array of numbers");
                values.push_back(v.get<double>());
            }
            s.init_grid.emplace_back(it.key(), std::move(values));
        }
    }

    if (s.grid_levels <= 0 || s.grid_levels % 2 == 0)
        fail(path + ".grid_levels",
             "grid levels must be an odd positive count, got " +
                 std::to_string(s.grid_levels));
    if (!(s.grid_step_deg > 0.0)) fail(path + ".grid_step_deg", "must be positive");
    if (s.m_selected < 1) fail(path + ".m_selected", "must be >= 1");
    if (s.interesting_dofs.empty())
        fail(path + ".interesting_dofs", "at least one dof is required");
    if (!(s.noise_sigma_deg >= 0.0)) fail(path + ".noise_sigma_deg", "must be >= 0");
    if (!(s.noise_sigma_m >= 0.0)) fail(path + ".noise_sigma_m", "must be >= 0");
    return s;
}

ScenarioSection parse_scenario(const J& obj, const std::string& path) {
    if (!obj.is_object()) fail(path, "expected an object");
    check_keys(obj, path,
               {"step_length_m", "cadence_steps_min", "heading_deg", "frame_count",
                "pixel_noise_rate", "seed", "background_level", "foreground_level",
                "knee_lift_deg"});
    ScenarioSection s;
    read_double(obj, path, "step_length_m", s.step_length_m);
    read_double(obj, path, "cadence_steps_min", s.cadence_steps_min);
    read_double(obj, path, "heading_deg", s.heading_deg);
    read_int(obj, path, "frame_count", s.frame_count);
    read_double(obj, path, "pixel_noise_rate", s.pixel_noise_rate);
    read_u64(obj, path, "seed", s.seed);
    read_int(obj, path, "background_level", s.background_level);
    read_int(obj, path, "foreground_level", s.foreground_level);
    read_double(obj, path, "knee_lift_deg", s.knee_lift_deg);

    if (s.frame_count < 1) fail(path + ".frame_count", "must be >= 1");
    if (s.step_length_m < 0.0) fail(path + ".step_length_m", "must be >= 0");
    if (s.cadence_steps_min < 0.0) fail(path + ".cadence_steps_min", "must be >= 0");
    if (s.pixel_noise_rate < 0.0 || s.pixel_noise_rate >= 1.0)
        fail(path + ".pixel_noise_rate", "must be in [0, 1)");
    if (s.background_level < 0 || s.background_level > 255)
        fail(path + ".background_level", "must be in 0..255");
    if (s.foreground_level < 0 || s.foreground_level > 255)
        fail(path + ".foreground_level", "must be in 0..255");
    if (s.knee_lift_deg < 0.0) fail(path + ".knee_lift_deg", "must be >= 0");
    return s;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    J root;
    try {
        root = J::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    if (!root.is_object()) throw ConfigError("config: top level must be an object");
    check_keys(root, "config",
               {"output_dir", "frame_rate_hz", "body_height_m", "skeleton_file",
                "threads", "imaging", "gait", "frames_dirs", "backgrounds", "cameras",
                "ipf", "scenario"});

    RunConfig c;
    read_string(root, "config", "output_dir", c.output_dir);
    read_double(root, "config", "frame_rate_hz", c.frame_rate_hz);
    read_double(root, "config", "body_height_m", c.body_height_m);
    read_string(root, "config", "skeleton_file", c.skeleton_file);
    read_int(root, "config", "threads", c.threads);
    if (const J* imaging = find(root, "imaging")) {
        if (!imaging->is_object()) fail("config.imaging", "expected an object");
        check_keys(*imaging, "config.imaging", {"threshold"});
        read_int(*imaging, "config.imaging", "threshold", c.imaging_threshold);
    }
    if (const J* gait = find(root, "gait")) {
        if (!gait->is_object()) fail("config.gait", "expected an object");
        check_keys(*gait, "config.gait", {"velocity_threshold_m_s"});
        read_double(*gait, "config.gait", "velocity_threshold_m_s",
                    c.gait_velocity_threshold_m_s);
    }
    read_string_list(root, "config", "frames_dirs", c.frames_dirs);
    read_string_list(root, "config", "backgrounds", c.backgrounds);
    if (const J* cameras = find(root, "cameras")) {
        if (!cameras->is_array()) fail("config.cameras", "expected an array");
        c.cameras.clear();
        for (std::size_t i = 0; i < cameras->size(); ++i)
            c.cameras.push_back(parse_camera(
                (*cameras)[i], "config.cameras[" + std::to_string(i) + "]"));
    }
    if (const J* ipf = find(root, "ipf")) c.ipf = parse_ipf(*ipf, "config.ipf");
    if (const J* scenario = find(root, "scenario"))
        c.scenario = parse_scenario(*scenario, "config.scenario");

    if (!(c.frame_rate_hz > 0.0)) fail("config.frame_rate_hz", "must be positive");
    if (!(c.body_height_m > 0.0)) fail("config.body_height_m", "must be positive");
    if (c.threads < 0) fail("config.threads", "must be >= 0");
    if (c.imaging_threshold < 0 || c.imaging_threshold > 255)
        fail("config.imaging.threshold", "must be in 0..255");
    if (!(c.gait_velocity_threshold_m_s > 0.0))
        fail("config.gait.velocity_threshold_m_s", "must be positive");
    if (!c.frames_dirs.empty() && c.frames_dirs.size() != c.cameras.size())
        fail("config.frames_dirs", "count (" + std::to_string(c.frames_dirs.size()) +
                                       ") must equal camera count (" +
                                       std::to_string(c.cameras.size()) + ")");
    if (c.backgrounds.size() != c.frames_dirs.size())
        fail("config.backgrounds", "count must equal frames_dirs count");
    return c;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("config: cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    RunConfig c = parse_config(buffer.str());

    const std::filesystem::path base = std::filesystem::path(path).parent_path();
    auto resolve = [&](std::string& p) {
        if (!p.empty() && std::filesystem::path(p).is_relative())
            p = (base / p).string();
    };
    resolve(c.output_dir);
    resolve(c.skeleton_file);
    for (std::string& p : c.frames_dirs) resolve(p);
    for (std::string& p : c.backgrounds) resolve(p);
    return c;
}

std::string serialize_config(const RunConfig& c) {
    J root;
    root["output_dir"] = c.output_dir;
    root["frame_rate_hz"] = c.frame_rate_hz;
    root["body_height_m"] = c.body_height_m;
    root["skeleton_file"] = c.skeleton_file;
    root["threads"] = c.threads;
    root["imaging"] = {{"threshold", c.imaging_threshold}};
    root["gait"] = {{"velocity_threshold_m_s", c.gait_velocity_threshold_m_s}};
    root["frames_dirs"] = c.frames_dirs;
    root["backgrounds"] = c.backgrounds;
    J cameras = J::array();
    for (const Camera& cam : c.cameras) {
        J rotation = J::array();
        for (int r = 0; r < 3; ++r)
            rotation.push_back({cam.rotation(r, 0), cam.rotation(r, 1), cam.rotation(r, 2)});
        cameras.push_back({{"width", cam.width},
                           {"height", cam.height},
                           {"focal_px", cam.focal_px},
                           {"center_u", cam.center_u},
                           {"center_v", cam.center_v},
                           {"rotation", std::move(rotation)},
                           {"translation",
                            {cam.translation.x(), cam.translation.y(), cam.translation.z()}}});
    }
    root["cameras"] = std::move(cameras);

    J ipf;
    ipf["interesting_dofs"] = c.ipf.interesting_dofs;
    ipf["grid_step_deg"] = c.ipf.grid_step_deg;
    ipf["grid_levels"] = c.ipf.grid_levels;
    ipf["m_selected"] = c.ipf.m_selected;
    ipf["rng_seed"] = c.ipf.rng_seed;
    ipf["noise_sigma_deg"] = c.ipf.noise_sigma_deg;
    ipf["noise_sigma_m"] = c.ipf.noise_sigma_m;
    J overrides = J::object();
    for (const auto& [dof, sigma] : c.ipf.noise_sigma_overrides) overrides[dof] = sigma;
    ipf["noise_sigma_overrides"] = std::move(overrides);
    J grid = J::object();
    for (const auto& [dof, values] : c.ipf.init_grid) grid[dof] = values;
    ipf["init_grid"] = std::move(grid);
    root["ipf"] = std::move(ipf);

    root["scenario"] = {{"step_length_m", c.scenario.step_length_m},
                        {"cadence_steps_min", c.scenario.cadence_steps_min},
                        {"heading_deg", c.scenario.heading_deg},
                        {"frame_count", c.scenario.frame_count},
                        {"pixel_noise_rate", c.scenario.pixel_noise_rate},
                        {"seed", c.scenario.seed},
                        {"background_level", c.scenario.background_level},
                        {"foreground_level", c.scenario.foreground_level},
                        {"knee_lift_deg", c.scenario.knee_lift_deg}};
    return root.dump(2) + "\n";
}

Runtime build_runtime(const RunConfig& config) {
    Runtime rt;
    if (!config.skeleton_file.empty()) {
        auto [skeleton, flesh] = load_skeleton_file(config.skeleton_file);
        rt.skeleton = std::move(skeleton);
        rt.flesh = flesh;
    } else {
        rt.skeleton = Skeleton::default_skeleton(config.body_height_m);
        rt.flesh = FleshModel::default_flesh(config.body_height_m);
    }

    auto dof_by_name = [&](const std::string& name, const char* where) {
        int idx = rt.skeleton.dof_index(name);
        if (idx < 0)
            throw ConfigError(std::string("config: ") + where + ": unknown dof '" +
                              name + "'");
        return idx;
    };

    IpfConfig ipf;
    for (const std::string& name : config.ipf.interesting_dofs)
        ipf.interesting_dims.push_back(dof_by_name(name, "ipf.interesting_dofs"));
    ipf.grid_step = deg_to_rad(config.ipf.grid_step_deg);
    ipf.grid_levels = config.ipf.grid_levels;
    ipf.m_selected = config.ipf.m_selected;
    ipf.rng_seed = config.ipf.rng_seed;
    ipf.threads = config.threads;
    for (int d = 0; d < kNumDofs; ++d) {
        const Dof& dof = rt.skeleton.dofs[static_cast<std::size_t>(d)];
        ipf.noise_sigma[static_cast<std::size_t>(d)] =
            dof.kind == DofKind::Translation ? config.ipf.noise_sigma_m
                                             : deg_to_rad(config.ipf.noise_sigma_deg);
    }
    for (const auto& [name, sigma] : config.ipf.noise_sigma_overrides) {
        int idx = dof_by_name(name, "ipf.noise_sigma_overrides");
        const Dof& dof = rt.skeleton.dofs[static_cast<std::size_t>(idx)];
        ipf.noise_sigma[static_cast<std::size_t>(idx)] =
            dof.kind == DofKind::Translation ? sigma : deg_to_rad(sigma);
    }
    for (const auto& [name, values] : config.ipf.init_grid) {
        int idx = dof_by_name(name, "ipf.init_grid");
        const Dof& dof = rt.skeleton.dofs[static_cast<std::size_t>(idx)];
        std::vector<double> converted;
        converted.reserve(values.size());
        for (double v : values)
            converted.push_back(dof.kind == DofKind::Translation ? v : deg_to_rad(v));
        ipf.init_grid.emplace_back(idx, std::move(converted));
    }
    ipf.base_pose = standing_pose(rt.skeleton);
    ipf.validate(rt.skeleton);
    rt.ipf = std::move(ipf);

    rt.cameras = config.cameras;

    WalkScenario scenario;
    scenario.body_height_m = config.body_height_m;
    scenario.step_length_m = config.scenario.step_length_m;
    scenario.cadence_steps_min = config.scenario.cadence_steps_min;
    scenario.heading_deg = config.scenario.heading_deg;
    scenario.frame_rate_hz = config.frame_rate_hz;
    scenario.frame_count = config.scenario.frame_count;
    if (!config.cameras.empty()) scenario.camera = config.cameras.front();
    scenario.pixel_noise_rate = config.scenario.pixel_noise_rate;
    scenario.seed = config.scenario.seed;
    scenario.background_level = static_cast<std::uint8_t>(config.scenario.background_level);
    scenario.foreground_level = static_cast<std::uint8_t>(config.scenario.foreground_level);
    scenario.knee_lift_deg = config.scenario.knee_lift_deg;
    scenario.validate();
    rt.scenario = scenario;
    return rt;
}

}  // namespace mocap
