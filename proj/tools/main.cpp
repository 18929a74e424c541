#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dualcbf/barrier.hpp"
#include "dualcbf/config.hpp"
#include "dualcbf/sim.hpp"
#include "dualcbf/verification.hpp"

namespace {

namespace fs = std::filesystem;
using namespace dualcbf;

struct CliOverrides {
    std::optional<std::string> scenario;
    std::optional<std::uint64_t> seed;
    std::optional<int> ticks;
    std::optional<std::string> out_dir;
    bool no_filter = false;
};

RunConfig assemble_config(const std::string& config_path, const CliOverrides& ov) {
    RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
    if (ov.scenario) cfg.scenario = *ov.scenario;
    if (ov.seed) cfg.seed = *ov.seed;
    if (ov.ticks) cfg.ticks = *ov.ticks;
    if (ov.out_dir) cfg.out_dir = *ov.out_dir;
    if (ov.no_filter) cfg.filter_enabled = false;
    cfg.validate();
    if (cfg.d0 <= cfg.d_safe)
        std::cerr << "warning: d0 (" << cfg.d0 << ") <= d_safe (" << cfg.d_safe
                  << "); repulsion starts inside the standoff\n";
    return cfg;
}

fs::path episode_dir(const RunConfig& cfg) {
    const std::string scenario_name = fs::path(resolve_scenario_path(cfg.scenario)).stem().string();
    const std::string mode = cfg.filter_enabled ? "cbf" : "baseline";
    return fs::path(cfg.out_dir) / (scenario_name + "_" + std::to_string(cfg.seed) + "_" + mode);
}

EpisodeResult run_and_write(const RunConfig& cfg) {
    const EpisodeResult result = run_episode(cfg);
    const fs::path dir = episode_dir(cfg);
    fs::create_directories(dir);
    {
        std::ofstream trace(dir / "trace.csv", std::ios::binary);
        write_trace_csv(result.trace, trace);
    }
    {
        std::ofstream summary(dir / "summary.txt");
        summary << format_summary(result.metrics, cfg);
        summary << cfg.echo();
    }
    {
        std::ofstream echo(dir / "config.txt");
        echo << cfg.echo();
    }
    return result;
}

int cmd_run(const std::string& config_path, const CliOverrides& ov, bool fail_on_contact) {
    const RunConfig cfg = assemble_config(config_path, ov);
    const EpisodeResult result = run_and_write(cfg);
    std::cout << format_summary(result.metrics, cfg);
    std::cout << "output_dir = " << episode_dir(cfg).string() << '\n';
    if (fail_on_contact && result.metrics.contacts > 0) return 3;
    return 0;
}

struct Aggregate {
    double explored_area = 0, path_length = 0, avg_speed = 0, min_clearance = 0;
    double obstacle_violation = 0, frontier_violation = 0, intervention_rate = 0;
    double speed_clips = 0, avg_slack = 0, avg_gamma2 = 0, time_s = 0;
    int runs = 0;

    void add(const EpisodeMetrics& m, double dt) {
        explored_area += m.explored_area;
        path_length += m.path_length;
        avg_speed += m.avg_speed;
        min_clearance += m.min_clearance;
        obstacle_violation += m.obstacle_violation_ticks;
        frontier_violation += m.frontier_violation_ticks;
        intervention_rate += m.intervention_rate;
        speed_clips += m.speed_clips;
        avg_slack += m.avg_slack;
        avg_gamma2 += m.avg_gamma2;
        time_s += m.ticks_evaluated * dt;
        ++runs;
    }
    double mean(double sum) const { return runs > 0 ? sum / runs : 0.0; }
};

int cmd_compare(const std::string& config_path, const CliOverrides& ov, int seeds) {
    RunConfig base = assemble_config(config_path, ov);
    Aggregate cbf, baseline;
    for (int s = 1; s <= seeds; ++s) {
        RunConfig cfg = base;
        cfg.seed = s;
        cfg.filter_enabled = true;
        cbf.add(run_and_write(cfg).metrics, cfg.dt);
        cfg.filter_enabled = false;
        baseline.add(run_and_write(cfg).metrics, cfg.dt);
    }

    std::ostringstream table;
    table << std::fixed << std::setprecision(4);
    auto row = [&](const char* name, double a, double b, bool baseline_na = false) {
        table << std::left << std::setw(28) << name << std::right << std::setw(12) << a
              << std::setw(12);
        if (baseline_na)
            table << "-";
        else
            table << b;
        table << '\n';
    };
    table << std::left << std::setw(28) << "metric (mean over seeds)" << std::right
          << std::setw(12) << "cbf" << std::setw(12) << "baseline" << '\n';
    row("exploration_time_s", cbf.mean(cbf.time_s), baseline.mean(baseline.time_s));
    row("explored_area_m2", cbf.mean(cbf.explored_area), baseline.mean(baseline.explored_area));
    row("path_length_m", cbf.mean(cbf.path_length), baseline.mean(baseline.path_length));
    row("avg_speed_mps", cbf.mean(cbf.avg_speed), baseline.mean(baseline.avg_speed));
    row("min_clearance_m", cbf.mean(cbf.min_clearance), baseline.mean(baseline.min_clearance));
    row("obstacle_violation_ticks", cbf.mean(cbf.obstacle_violation),
        baseline.mean(baseline.obstacle_violation));
    row("frontier_violation_ticks", cbf.mean(cbf.frontier_violation),
        baseline.mean(baseline.frontier_violation));
    row("intervention_rate", cbf.mean(cbf.intervention_rate),
        baseline.mean(baseline.intervention_rate));
    row("speed_clips", cbf.mean(cbf.speed_clips), baseline.mean(baseline.speed_clips));
    row("avg_slack", cbf.mean(cbf.avg_slack), baseline.mean(baseline.avg_slack));
    row("avg_gamma2", cbf.mean(cbf.avg_gamma2), 0.0, true);

    std::cout << table.str();
    fs::create_directories(base.out_dir);
    std::ofstream out(fs::path(base.out_dir) / "compare.txt");
    out << table.str();
    return 0;
}

int cmd_verify(double tolerance, std::uint64_t seed) {
    const bool ok = verification::run_all(std::cout, tolerance, seed);
    std::cout << (ok ? "verification passed\n" : "verification FAILED\n");
    return ok ? 0 : 2;
}

int cmd_admissibility() {
    auto report = [](const char* name, const AdmissibilityReport& r) {
        std::cout << name << ": T1 " << (r.odd_sign ? "pass" : "FAIL") << ", T2 "
                  << (r.strictly_increasing ? "pass" : "FAIL") << ", T3 "
                  << (r.derivative_bounded ? "pass" : "FAIL") << ", T4 "
                  << (r.bounded ? "pass" : "FAIL") << ", derivative/FD "
                  << (r.derivative_matches_fd ? "pass" : "FAIL")
                  << "  (max |T'| = " << r.max_abs_derivative << ")\n";
    };
    report("tanh", check_admissibility(ShapingFunction::tanh_shaping()));
    report("rational", check_admissibility(ShapingFunction::rational()));
    report("erf", check_admissibility(ShapingFunction::erf_like()));
    report("identity", check_admissibility(ShapingFunction::identity()));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dual-barrier CBF velocity safety filter on occupancy grids"};
    app.require_subcommand(1);

    std::string config_path;
    CliOverrides ov;
    bool fail_on_contact = false;
    int seeds = 5;
    double verify_tolerance = 1e-6;
    std::uint64_t verify_seed = 12345;

    auto add_shared = [&](CLI::App* cmd, bool with_filter_flags) {
        cmd->add_option("--config", config_path, "flat key = value config file");
        cmd->add_option("--scenario", ov.scenario, "scenario file or bundled name");
        cmd->add_option("--ticks", ov.ticks, "number of control ticks");
        cmd->add_option("--out-dir", ov.out_dir, "output directory");
        if (with_filter_flags) {
            cmd->add_option("--seed", ov.seed, "episode seed");
            cmd->add_flag("--no-filter", ov.no_filter, "bypass the safety filter (baseline)");
        }
    };

    CLI::App* run = app.add_subcommand("run", "run one episode, write trace + summary");
    add_shared(run, true);
    run->add_flag("--fail-on-contact", fail_on_contact, "exit 3 if a contact occurred");

    CLI::App* compare =
        app.add_subcommand("compare", "paired filtered/baseline sweep over N seeds");
    add_shared(compare, false);
    compare->add_option("--seeds", seeds, "number of paired seeds")->check(CLI::PositiveNumber);

    CLI::App* verify = app.add_subcommand("verify", "run the oracle verification sweeps");
    verify->add_option("--verify-tolerance", verify_tolerance,
                       "dual projection match tolerance");
    verify->add_option("--seed", verify_seed, "sweep seed");

    app.add_subcommand("admissibility", "report shaping-class checks");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(config_path, ov, fail_on_contact);
        if (compare->parsed()) return cmd_compare(config_path, ov, seeds);
        if (verify->parsed()) return cmd_verify(verify_tolerance, verify_seed);
        return cmd_admissibility();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
