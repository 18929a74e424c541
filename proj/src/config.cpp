#include "dualcbf/config.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace dualcbf {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("config key '" + key + "': expected a number, got '" + value + "'");
    }
}

long long parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("config key '" + key + "': expected an integer, got '" + value + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw std::invalid_argument("config key '" + key + "': expected true/false, got '" + value + "'");
}

struct KeyBinding {
    std::string name;
    std::function<void(RunConfig&, const std::string&)> set;
    std::function<std::string(const RunConfig&)> get;
};

const std::vector<KeyBinding>& bindings() {
    auto dbl = [](const char* name, double RunConfig::* field) {
        return KeyBinding{
            name,
            [name, field](RunConfig& c, const std::string& v) { c.*field = parse_double(name, v); },
            [field](const RunConfig& c) { return format_double(c.*field); }};
    };
    auto integer = [](const char* name, int RunConfig::* field) {
        return KeyBinding{
            name,
            [name, field](RunConfig& c, const std::string& v) {
                c.*field = static_cast<int>(parse_int(name, v));
            },
            [field](const RunConfig& c) { return std::to_string(c.*field); }};
    };
    static const std::vector<KeyBinding> table = {
        KeyBinding{"scenario",
                   [](RunConfig& c, const std::string& v) { c.scenario = v; },
                   [](const RunConfig& c) { return c.scenario; }},
        integer("ticks", &RunConfig::ticks),
        dbl("dt", &RunConfig::dt),
        KeyBinding{"seed",
                   [](RunConfig& c, const std::string& v) {
                       c.seed = static_cast<std::uint64_t>(parse_int("seed", v));
                   },
                   [](const RunConfig& c) { return std::to_string(c.seed); }},
        KeyBinding{"filter_enabled",
                   [](RunConfig& c, const std::string& v) {
                       c.filter_enabled = parse_bool("filter_enabled", v);
                   },
                   [](const RunConfig& c) { return c.filter_enabled ? "true" : "false"; }},
        KeyBinding{"out_dir",
                   [](RunConfig& c, const std::string& v) { c.out_dir = v; },
                   [](const RunConfig& c) { return c.out_dir; }},
        dbl("a1", &RunConfig::a1),
        dbl("a2", &RunConfig::a2),
        dbl("d_safe", &RunConfig::d_safe),
        dbl("d_stop", &RunConfig::d_stop),
        dbl("gamma1", &RunConfig::gamma1),
        dbl("gamma2_min", &RunConfig::gamma2_min),
        dbl("gamma2_max", &RunConfig::gamma2_max),
        KeyBinding{"shaping",
                   [](RunConfig& c, const std::string& v) { c.shaping = v; },
                   [](const RunConfig& c) { return c.shaping; }},
        dbl("penalty_p", &RunConfig::penalty_p),
        dbl("v_max", &RunConfig::v_max),
        dbl("parallel_tol", &RunConfig::parallel_tol),
        dbl("degenerate_tol", &RunConfig::degenerate_tol),
        integer("bisection_iters", &RunConfig::bisection_iters),
        dbl("intervention_tol", &RunConfig::intervention_tol),
        dbl("k_att", &RunConfig::k_att),
        dbl("k_rep", &RunConfig::k_rep),
        dbl("d0", &RunConfig::d0),
        dbl("v_nom_cap", &RunConfig::v_nom_cap),
        dbl("goal_reached_radius", &RunConfig::goal_reached_radius),
        integer("n_min", &RunConfig::n_min),
        dbl("sensor_range", &RunConfig::sensor_range),
        integer("ray_count", &RunConfig::ray_count),
        dbl("fov_deg", &RunConfig::fov_deg),
        dbl("rho_radius", &RunConfig::rho_radius),
        dbl("robot_radius", &RunConfig::robot_radius),
    };
    return table;
}

void require(bool ok, const char* message) {
    if (!ok) throw std::invalid_argument(message);
}

}  // namespace

void RunConfig::validate() const {
    require(ticks >= 1, "config key 'ticks': must be >= 1");
    require(dt > 0.0, "config key 'dt': must be > 0");
    require(a1 > 0.0, "config key 'a1': must be > 0");
    require(a2 > 0.0, "config key 'a2': must be > 0");
    require(d_safe >= 0.0, "config key 'd_safe': must be >= 0");
    require(d_stop >= 0.0, "config key 'd_stop': must be >= 0");
    require(gamma1 > 0.0, "config key 'gamma1': must be > 0");
    require(gamma2_min > 0.0, "config key 'gamma2_min': must be > 0");
    require(gamma2_max >= gamma2_min, "config key 'gamma2_max': must be >= gamma2_min");
    require(shaping == "tanh" || shaping == "rational" || shaping == "erf",
            "config key 'shaping': must be one of tanh|rational|erf");
    require(penalty_p > 0.0, "config key 'penalty_p': must be > 0");
    require(v_max > 0.0, "config key 'v_max': must be > 0");
    require(parallel_tol > 0.0, "config key 'parallel_tol': must be > 0");
    require(degenerate_tol > 0.0, "config key 'degenerate_tol': must be > 0");
    require(bisection_iters >= 1, "config key 'bisection_iters': must be >= 1");
    require(intervention_tol >= 0.0, "config key 'intervention_tol': must be >= 0");
    require(k_att > 0.0, "config key 'k_att': must be > 0");
    require(k_rep > 0.0, "config key 'k_rep': must be > 0");
    require(d0 > 0.0, "config key 'd0': must be > 0");
    require(v_nom_cap > 0.0, "config key 'v_nom_cap': must be > 0");
    require(goal_reached_radius > 0.0, "config key 'goal_reached_radius': must be > 0");
    require(n_min >= 1, "config key 'n_min': must be >= 1");
    require(sensor_range > 0.0, "config key 'sensor_range': must be > 0");
    require(ray_count >= 8, "config key 'ray_count': must be >= 8");
    require(fov_deg > 0.0 && fov_deg <= 360.0, "config key 'fov_deg': must be in (0, 360]");
    require(effective_rho_radius() > 0.0, "config key 'rho_radius': must be > 0");
    require(robot_radius > 0.0, "config key 'robot_radius': must be > 0");
}

std::string RunConfig::echo() const {
    std::ostringstream out;
    for (const KeyBinding& kb : bindings()) out << kb.name << " = " << kb.get(*this) << '\n';
    return out.str();
}

RunConfig parse_config(std::istream& in) {
    RunConfig cfg;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        bool matched = false;
        for (const KeyBinding& kb : bindings()) {
            if (kb.name == key) {
                kb.set(cfg, value);
                matched = true;
                break;
            }
        }
        if (!matched) throw std::invalid_argument("config: unknown key '" + key + "'");
    }
    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open '" + path + "'");
    return parse_config(in);
}

}  // namespace dualcbf
