#include "dom/config.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>

namespace dom {
namespace {

constexpr std::array kKnownKeys = {
    "sim.control_rate_hz",
    "sim.speed_min",
    "sim.speed_max",
    "sim.friction_min",
    "sim.friction_max",
    "sim.n_objects",
    "sim.workspace_min_x",
    "sim.workspace_min_y",
    "sim.workspace_min_z",
    "sim.workspace_max_x",
    "sim.workspace_max_y",
    "sim.workspace_max_z",
    "sim.grasp_tolerance",
    "sim.grasp_speed_tolerance",
    "sim.place_tolerance",
    "sim.v_max",
    "sim.timeout_ticks",
    "sim.gravity",
    "sim.object_radius",
    "sim.bounce_walls",
    "expert.predict_horizon_s",
    "expert.hover_offset",
    "expert.hover_tolerance",
    "expert.lift_height",
    "expert.velocity_window",
    "expert.use_velocity_estimator",
    "executor.mode",
    "executor.latency_ticks",
    "executor.latency_jitter",
    "executor.chunk_horizon",
    "executor.gap_behavior",
    "flow.hidden_width",
    "flow.steps",
    "flow.batch",
    "flow.learning_rate",
    "flow.sample_steps",
    "bench.trials",
    "bench.speed_grid",
    "bench.friction_grid",
    "bench.disturbance_impulse",
    "bench.observation_noise",
};

bool known_key(const std::string& k) {
    return std::find(kKnownKeys.begin(), kKnownKeys.end(), k) != kKnownKeys.end();
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace

Config::Config() = default;

Config Config::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_string(ss.str());
}

Config Config::from_string(const std::string& text) {
    Config cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        cfg.parse_line(line, lineno);
    }
    return cfg;
}

void Config::parse_line(const std::string& raw, int lineno) {
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') return;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
        throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
}

void Config::set(const std::string& key, const std::string& value) {
    if (!known_key(key)) throw ConfigError("unknown config key: " + key);
    values_[key] = value;
}

double Config::get_double(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("missing config key: " + key);
    size_t pos = 0;
    double v = std::stod(it->second, &pos);
    if (pos != it->second.size()) throw ConfigError("bad numeric value for " + key);
    return v;
}

int Config::get_int(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("missing config key: " + key);
    size_t pos = 0;
    int v = std::stoi(it->second, &pos);
    if (pos != it->second.size()) throw ConfigError("bad integer value for " + key);
    return v;
}

bool Config::get_bool(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("missing config key: " + key);
    if (it->second == "true" || it->second == "1") return true;
    if (it->second == "false" || it->second == "0") return false;
    throw ConfigError("bad boolean value for " + key);
}

std::string Config::get_string(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("missing config key: " + key);
    return it->second;
}

std::string Config::canonical_text() const {
    std::string out;
    for (const auto& [k, v] : values_) {
        out += k;
        out += '=';
        out += v;
        out += '\n';
    }
    return out;
}

uint64_t Config::digest() const {
    std::string text = canonical_text();
    return fnv1a(text.data(), text.size());
}

}  // namespace dom
