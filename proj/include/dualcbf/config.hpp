#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

namespace dualcbf {

/// Flat run configuration. Defaults reproduce the shipped parameter table:
/// d_safe = d_stop = 0.35 m, a1 = a2 = 2.0, gamma1 = 1.5, gamma2 in
/// [0.2, 1.0], v_max = 0.20 m/s, n_min = 25 cells.
struct RunConfig {
    // run shape
    std::string scenario;  // path or bundled scenario name
    int ticks = 1200;
    double dt = 0.1;            // s
    std::uint64_t seed = 1;
    bool filter_enabled = true;
    std::string out_dir = "out";

    // barrier
    double a1 = 2.0;
    double a2 = 2.0;
    double d_safe = 0.35;      // m
    double d_stop = 0.35;      // m
    double gamma1 = 1.5;       // 1/s
    double gamma2_min = 0.2;   // 1/s
    double gamma2_max = 1.0;   // 1/s
    std::string shaping = "tanh";  // tanh | rational | erf

    // filter
    double penalty_p = 50.0;
    double v_max = 0.20;        // m/s
    double parallel_tol = 1e-6;
    double degenerate_tol = 1e-9;
    int bisection_iters = 20;
    double intervention_tol = 1e-6;  // m/s

    // nominal controller
    double k_att = 0.8;
    double k_rep = 0.05;
    double d0 = 1.0;            // m
    double v_nom_cap = 0.2;     // m/s
    double goal_reached_radius = 0.3;  // m

    // mapping / sensing
    int n_min = 25;             // cells
    double sensor_range = 3.0;  // m
    int ray_count = 180;
    double fov_deg = 360.0;
    double rho_radius = -1.0;   // m; non-positive means "use sensor_range"
    double robot_radius = 0.22; // m

    double effective_rho_radius() const { return rho_radius > 0.0 ? rho_radius : sensor_range; }

    /// Throws std::invalid_argument naming the offending key.
    void validate() const;

    /// Full-precision flat key=value echo; parseable by parse()/load_config().
    std::string echo() const;

    bool operator==(const RunConfig&) const = default;
};

/// Parse `key = value` lines ('#' comments, blank lines allowed). Unknown keys
/// and type mismatches are rejected by name; missing keys keep defaults.
/// Validates before returning.
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::string& path);

}  // namespace dualcbf
