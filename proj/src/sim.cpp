#include "dualcbf/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "dualcbf/rng.hpp"

#ifndef DUALCBF_SCENARIO_DIR
#define DUALCBF_SCENARIO_DIR "scenarios"
#endif

namespace dualcbf {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

// March one ray with an Amanatides-Woo grid traversal, updating the belief.
void cast_ray(const World& world, OccupancyGrid& belief, const Vec2& from, double angle,
              double range) {
    const OccupancyGrid& truth = world.truth;
    const double res = truth.resolution;
    const Vec2 dir{std::cos(angle), std::sin(angle)};

    auto [x, y] = truth.world_to_cell(from);
    x = std::clamp(x, 0, truth.width - 1);
    y = std::clamp(y, 0, truth.height - 1);

    const int step_x = dir.x > 0.0 ? 1 : -1;
    const int step_y = dir.y > 0.0 ? 1 : -1;

    // Distance along the ray to the first vertical/horizontal cell border.
    const Vec2 center = truth.cell_center(x, y);
    const double next_bx = center.x + step_x * res * 0.5;
    const double next_by = center.y + step_y * res * 0.5;
    double t_max_x = std::abs(dir.x) > 1e-12 ? (next_bx - from.x) / dir.x : 1e18;
    double t_max_y = std::abs(dir.y) > 1e-12 ? (next_by - from.y) / dir.y : 1e18;
    const double t_delta_x = std::abs(dir.x) > 1e-12 ? res / std::abs(dir.x) : 1e18;
    const double t_delta_y = std::abs(dir.y) > 1e-12 ? res / std::abs(dir.y) : 1e18;

    double traveled = 0.0;
    while (traveled <= range) {
        if (truth.at(x, y) == CellState::Occupied) {
            belief.at(x, y) = CellState::Occupied;
            return;  // ray blocked
        }
        belief.at(x, y) = CellState::Free;
        if (t_max_x < t_max_y) {
            traveled = t_max_x;
            t_max_x += t_delta_x;
            x += step_x;
        } else {
            traveled = t_max_y;
            t_max_y += t_delta_y;
            y += step_y;
        }
        if (!truth.in_bounds(x, y)) return;
    }
}

}  // namespace

Scenario parse_scenario(std::istream& in, std::string name) {
    Scenario s;
    s.name = std::move(name);
    s.world.truth = OccupancyGrid::parse(in);
    for (const CellState c : s.world.truth.cells)
        if (c == CellState::Unknown)
            throw std::runtime_error("scenario: ground truth must not contain '?' cells");
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("scenario: missing start line");
    std::istringstream ls(line);
    if (!(ls >> s.start.x >> s.start.y))
        throw std::runtime_error("scenario: start line must be 'start_x start_y'");
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("scenario: cannot open '" + path + "'");
    return parse_scenario(in, std::filesystem::path(path).stem().string());
}

std::string resolve_scenario_path(const std::string& scenario) {
    namespace fs = std::filesystem;
    if (fs::exists(scenario)) return scenario;
    for (const std::string dir : {std::string("scenarios"), std::string(DUALCBF_SCENARIO_DIR)}) {
        const fs::path candidate = fs::path(dir) / (scenario + ".txt");
        if (fs::exists(candidate)) return candidate.string();
    }
    throw std::runtime_error("scenario '" + scenario + "' not found (looked for a file and in " +
                             DUALCBF_SCENARIO_DIR ")");
}

void sense_and_update(const World& world, OccupancyGrid& belief, const Vec2& pos,
                      const SensorModel& sensor, const Vec2& heading) {
    const double heading_angle = std::atan2(heading.y, heading.x);
    const double fov = sensor.fov_deg * kPi / 180.0;
    for (int k = 0; k < sensor.ray_count; ++k) {
        // uniform spacing over the field of view, centered on the heading
        const double frac = sensor.ray_count > 1
                                ? static_cast<double>(k) / (sensor.fov_deg >= 360.0
                                                                ? sensor.ray_count
                                                                : sensor.ray_count - 1)
                                : 0.5;
        const double angle = heading_angle - 0.5 * fov + frac * fov;
        cast_ray(world, belief, pos, angle, sensor.range);
    }
}

RobotState step(const RobotState& state, const Vec2& u, double dt) {
    return RobotState{state.position + u * dt};
}

bool in_contact(const World& world, const Vec2& pos) {
    const OccupancyGrid& truth = world.truth;
    const double r = world.robot_radius;
    const double half = truth.resolution * 0.5;
    const auto [cx, cy] = truth.world_to_cell(pos);
    const int span = static_cast<int>(std::ceil((r + half) / truth.resolution)) + 1;
    for (int y = std::max(cy - span, 0); y <= std::min(cy + span, truth.height - 1); ++y) {
        for (int x = std::max(cx - span, 0); x <= std::min(cx + span, truth.width - 1); ++x) {
            if (truth.at(x, y) != CellState::Occupied) continue;
            const Vec2 c = truth.cell_center(x, y);
            const double dx = std::max(std::abs(pos.x - c.x) - half, 0.0);
            const double dy = std::max(std::abs(pos.y - c.y) - half, 0.0);
            if (dx * dx + dy * dy <= r * r) return true;
        }
    }
    return false;
}

EpisodeMetrics compute_metrics(const TickTrace& trace) {
    EpisodeMetrics m;
    m.ticks_evaluated = static_cast<int>(trace.ticks.size());
    m.contacts = trace.contacts;
    if (trace.ticks.empty()) return m;

    double min_clearance = std::numeric_limits<double>::infinity();
    double min_h1 = std::numeric_limits<double>::infinity();
    double min_h2 = std::numeric_limits<double>::infinity();
    double gamma2_sum = 0.0;
    int gamma2_ticks = 0;
    int interventions = 0;
    bool any_h2 = false;

    for (const TickRecord& r : trace.ticks) {
        m.path_length += r.u_safe.norm() * trace.dt;
        min_clearance = std::min(min_clearance, r.sdf_obs);
        min_h1 = std::min(min_h1, r.h1);
        if (r.h2) {
            any_h2 = true;
            min_h2 = std::min(min_h2, *r.h2);
        }
        if (r.sdf_obs < trace.d_safe) ++m.obstacle_violation_ticks;
        if (r.sdf_unk && *r.sdf_unk < trace.d_stop) ++m.frontier_violation_ticks;
        interventions += r.intervention;
        m.speed_clips += r.speed_clipped;
        m.avg_slack += r.slack;
        m.max_slack = std::max(m.max_slack, r.slack);
        if (r.gamma2) {
            gamma2_sum += *r.gamma2;
            ++gamma2_ticks;
        }
        m.obstacle_active_ticks += r.lambda1 > 0.0;
        m.frontier_active_ticks += r.lambda2 > 0.0;
        m.infeasible_count += r.active_case == FilterCase::SoftFallback;
    }
    const int n = m.ticks_evaluated;
    m.explored_area = trace.ticks.back().known_cells * trace.resolution * trace.resolution;
    m.avg_speed = m.path_length / (n * trace.dt);
    m.min_clearance = min_clearance;
    m.intervention_rate = static_cast<double>(interventions) / n;
    m.avg_slack /= n;
    m.avg_gamma2 = gamma2_ticks > 0 ? gamma2_sum / gamma2_ticks : 0.0;
    m.min_h1 = min_h1;
    m.min_h2 = any_h2 ? min_h2 : 0.0;
    return m;
}

void write_trace_csv(const TickTrace& trace, std::ostream& out) {
    out << "tick,t,px,py,udx,udy,usx,usy,h1,h2,sdf_obs,sdf_unk,rho,gamma2,case,"
           "lambda1,lambda2,slack,speed_clipped,intervention\n";
    auto opt = [](const std::optional<double>& v) { return v ? format_value(*v) : std::string(); };
    for (const TickRecord& r : trace.ticks) {
        out << r.tick << ',' << format_value(r.t) << ',' << format_value(r.pos.x) << ','
            << format_value(r.pos.y) << ',' << format_value(r.u_des.x) << ','
            << format_value(r.u_des.y) << ',' << format_value(r.u_safe.x) << ','
            << format_value(r.u_safe.y) << ',' << format_value(r.h1) << ',' << opt(r.h2) << ','
            << format_value(r.sdf_obs) << ',' << opt(r.sdf_unk) << ',' << opt(r.rho) << ','
            << opt(r.gamma2) << ',' << to_string(r.active_case) << ','
            << format_value(r.lambda1) << ',' << format_value(r.lambda2) << ','
            << format_value(r.slack) << ',' << (r.speed_clipped ? 1 : 0) << ','
            << (r.intervention ? 1 : 0) << '\n';
    }
}

std::string format_summary(const EpisodeMetrics& m, const RunConfig& config) {
    std::ostringstream out;
    out << "scenario = " << config.scenario << '\n';
    out << "mode = " << (config.filter_enabled ? "cbf" : "baseline") << '\n';
    out << "seed = " << config.seed << '\n';
    out << "explored_area = " << format_value(m.explored_area) << '\n';
    out << "path_length = " << format_value(m.path_length) << '\n';
    out << "avg_speed = " << format_value(m.avg_speed) << '\n';
    out << "min_clearance = " << format_value(m.min_clearance) << '\n';
    out << "obstacle_violation_ticks = " << m.obstacle_violation_ticks << '\n';
    out << "frontier_violation_ticks = " << m.frontier_violation_ticks << '\n';
    out << "intervention_rate = " << format_value(m.intervention_rate) << '\n';
    out << "speed_clips = " << m.speed_clips << '\n';
    out << "avg_slack = " << format_value(m.avg_slack) << '\n';
    out << "max_slack = " << format_value(m.max_slack) << '\n';
    out << "avg_gamma2 = " << format_value(m.avg_gamma2) << '\n';
    out << "ticks_evaluated = " << m.ticks_evaluated << '\n';
    out << "obstacle_active_ticks = " << m.obstacle_active_ticks << '\n';
    out << "frontier_active_ticks = " << m.frontier_active_ticks << '\n';
    out << "infeasible_count = " << m.infeasible_count << '\n';
    out << "min_h1 = " << format_value(m.min_h1) << '\n';
    out << "min_h2 = " << format_value(m.min_h2) << '\n';
    out << "contacts = " << m.contacts << '\n';
    return out.str();
}

EpisodeResult run_episode(const RunConfig& config, const TickObserver& observer) {
    const Scenario scenario = load_scenario(resolve_scenario_path(config.scenario));
    return run_episode(config, scenario, observer);
}

EpisodeResult run_episode(const RunConfig& config, const Scenario& scenario,
                          const TickObserver& observer) {
    config.validate();
    const World& world = scenario.world;
    const OccupancyGrid& truth = world.truth;

    Rng rng(config.seed);

    // Seeded start jitter within one cell, shrunk until collision free.
    Vec2 start = scenario.start;
    {
        Vec2 jitter = rng.in_disc(truth.resolution);
        for (int attempt = 0; attempt < 8; ++attempt) {
            if (!in_contact(world, scenario.start + jitter)) break;
            jitter = jitter * 0.5;
        }
        start = scenario.start + jitter;
        if (in_contact(world, start)) start = scenario.start;
    }
    const double heading0 = rng.uniform(0.0, 2.0 * kPi);
    Vec2 heading{std::cos(heading0), std::sin(heading0)};

    OccupancyGrid belief = OccupancyGrid::filled(truth.width, truth.height, truth.resolution,
                                                 CellState::Unknown, truth.origin);

    const ShapingFunction shaping = ShapingFunction::by_name(config.shaping);
    const BarrierSpec obstacle_spec{config.a1, config.d_safe, config.gamma1, shaping};
    const BarrierSpec frontier_spec{config.a2, config.d_stop, config.gamma2_max, shaping};
    const GammaSchedule schedule{config.gamma2_min, config.gamma2_max};
    FilterParams fparams;
    fparams.penalty = config.penalty_p;
    fparams.v_max = config.v_max;
    fparams.parallel_tolerance = config.parallel_tol;
    fparams.degenerate_norm = config.degenerate_tol;
    fparams.bisection_iters = config.bisection_iters;
    fparams.intervention_tolerance = config.intervention_tol;
    const ApfParams apf{config.k_att, config.k_rep, config.d0, config.v_nom_cap};
    const SensorModel sensor{config.sensor_range, config.ray_count, config.fov_deg};

    TickTrace trace;
    trace.dt = config.dt;
    trace.resolution = truth.resolution;
    trace.d_safe = config.d_safe;
    trace.d_stop = config.d_stop;
    trace.filter_enabled = config.filter_enabled;
    trace.seed = config.seed;
    trace.ticks.reserve(config.ticks);

    RobotState state{start};
    std::optional<Goal> goal;

    const Vec2 world_min = truth.cell_center(0, 0) - Vec2{truth.resolution, truth.resolution} * 0.5;
    const Vec2 world_max = truth.cell_center(truth.width - 1, truth.height - 1) +
                           Vec2{truth.resolution, truth.resolution} * 0.5;

    for (int tick = 0; tick < config.ticks; ++tick) {
        sense_and_update(world, belief, state.position, sensor, heading);

        const SignedDistanceField obstacle_sdf = compute_obstacle_sdf(belief);
        const FrontierClusterSet clusters = extract_frontier_clusters(belief, config.n_min);
        const std::optional<SignedDistanceField> frontier_sdf =
            compute_frontier_sdf(belief, clusters);

        const SdfSample obstacle = sample(obstacle_sdf, state.position);
        std::optional<SdfSample> frontier;
        std::optional<double> rho;
        if (frontier_sdf) {
            frontier = sample(*frontier_sdf, state.position);
            rho = uncertainty_density(belief, state.position, config.effective_rho_radius());
        }

        // Goal bookkeeping: reselect when reached, gone stale (its cell is no
        // longer inside a significant cluster), or never chosen.
        if (goal) {
            const bool reached =
                distance(goal->position, state.position) <= config.goal_reached_radius;
            // Stale when the goal point is no longer inside a significant
            // cluster (the frontier SDF's negative region).
            const bool inside_cluster =
                frontier_sdf && sample(*frontier_sdf, goal->position).value < 0.0;
            if (reached || !inside_cluster) goal.reset();
        }
        if (!goal) goal = select_goal(clusters, state.position);

        const Vec2 u_des =
            goal ? apf_velocity(state.position, *goal, obstacle, apf) : Vec2{};

        TickRecord rec;
        rec.tick = tick;
        rec.t = tick * config.dt;
        rec.pos = state.position;
        rec.u_des = u_des;
        rec.h1 = barrier_value(obstacle_spec, obstacle.value);
        rec.sdf_obs = obstacle.value;
        if (frontier) {
            rec.h2 = barrier_value(frontier_spec, frontier->value);
            rec.sdf_unk = frontier->value;
            rec.rho = rho;
        }

        FilterResult filtered;
        if (config.filter_enabled) {
            filtered = apply_filter(u_des, obstacle, frontier, rho, obstacle_spec,
                                    frontier_spec, schedule, fparams);
            rec.u_safe = filtered.u_safe;
            rec.gamma2 = filtered.gamma2;
            rec.active_case = filtered.active_case;
            rec.lambda1 = filtered.lambda1;
            rec.lambda2 = filtered.lambda2;
            rec.slack = filtered.slack;
            rec.speed_clipped = filtered.speed_clipped;
            rec.intervention_magnitude = filtered.intervention_magnitude;
            rec.intervention =
                filtered.intervention_magnitude > fparams.intervention_tolerance;
        } else {
            const Vec2 clipped = speed_ceiling(u_des, config.v_max);
            rec.u_safe = clipped;
            rec.speed_clipped = (clipped - u_des).squared_norm() > 0.0;
        }
        rec.known_cells = belief.known_cells();
        trace.ticks.push_back(rec);

        if (observer) {
            TickContext ctx{tick,
                            belief,
                            obstacle_sdf,
                            frontier_sdf,
                            clusters,
                            state.position,
                            u_des,
                            rec.u_safe,
                            config.filter_enabled ? &filtered : nullptr,
                            config.dt};
            observer(ctx);
        }

        if (rec.u_safe.squared_norm() > 1e-18) heading = rec.u_safe.normalized();

        state = step(state, rec.u_safe, config.dt);
        state.position.x = std::clamp(state.position.x, world_min.x, world_max.x);
        state.position.y = std::clamp(state.position.y, world_min.y, world_max.y);

        if (in_contact(world, state.position)) {
            trace.contacts = 1;
            break;
        }
    }

    EpisodeResult result;
    result.trace = std::move(trace);
    result.metrics = compute_metrics(result.trace);
    return result;
}

}  // namespace dualcbf
