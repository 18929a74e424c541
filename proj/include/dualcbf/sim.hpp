#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dualcbf/config.hpp"
#include "dualcbf/filter.hpp"
#include "dualcbf/grid.hpp"
#include "dualcbf/nominal.hpp"

namespace dualcbf {

/// Ground-truth map (Free/Occupied only) plus the robot's physical radius.
struct World {
    OccupancyGrid truth;
    double robot_radius = 0.22;  // m
};

struct Scenario {
    World world;
    Vec2 start;  // m, world coordinates
    std::string name;
};

/// Scenario file: the grid text format followed by one line "start_x start_y"
/// in meters. Throws std::runtime_error on malformed input.
Scenario parse_scenario(std::istream& in, std::string name = "scenario");
Scenario load_scenario(const std::string& path);

struct SensorModel {
    double range = 3.0;      // m
    int ray_count = 180;
    double fov_deg = 360.0;  // centered on the heading direction
};

/// Cast rays from pos through the ground truth and update the belief map:
/// traversed free cells become Free, the first occupied cell hit becomes
/// Occupied and blocks the ray. Known cells never revert to Unknown.
void sense_and_update(const World& world, OccupancyGrid& belief, const Vec2& pos,
                      const SensorModel& sensor, const Vec2& heading);

struct RobotState {
    Vec2 position;
};

/// Explicit Euler: position += u * dt.
RobotState step(const RobotState& state, const Vec2& u, double dt);

/// True when the robot disc overlaps any Occupied cell square of the truth map.
bool in_contact(const World& world, const Vec2& pos);

struct TickRecord {
    int tick = 0;
    double t = 0.0;
    Vec2 pos;      // before stepping
    Vec2 u_des;
    Vec2 u_safe;
    double h1 = 0.0;
    std::optional<double> h2;
    double sdf_obs = 0.0;
    std::optional<double> sdf_unk;
    std::optional<double> rho;
    std::optional<double> gamma2;
    FilterCase active_case = FilterCase::Nominal;
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double slack = 0.0;
    bool speed_clipped = false;
    bool intervention = false;
    double intervention_magnitude = 0.0;
    int known_cells = 0;  // belief cells mapped so far
};

struct TickTrace {
    std::vector<TickRecord> ticks;
    double dt = 0.1;
    double resolution = 0.1;
    double d_safe = 0.35;
    double d_stop = 0.35;
    bool filter_enabled = true;
    int contacts = 0;
    std::uint64_t seed = 0;
};

/// The metric vector for one run. Empty-set minima report 0.
struct EpisodeMetrics {
    double explored_area = 0.0;   // m^2
    double path_length = 0.0;     // m
    double avg_speed = 0.0;       // m/s
    double min_clearance = 0.0;   // m
    int obstacle_violation_ticks = 0;
    int frontier_violation_ticks = 0;
    double intervention_rate = 0.0;
    int speed_clips = 0;
    double avg_slack = 0.0;
    double max_slack = 0.0;
    double avg_gamma2 = 0.0;
    int ticks_evaluated = 0;
    int obstacle_active_ticks = 0;
    int frontier_active_ticks = 0;
    int infeasible_count = 0;
    double min_h1 = 0.0;
    double min_h2 = 0.0;
    int contacts = 0;
};

EpisodeMetrics compute_metrics(const TickTrace& trace);

/// Exact column order:
/// tick,t,px,py,udx,udy,usx,usy,h1,h2,sdf_obs,sdf_unk,rho,gamma2,case,
/// lambda1,lambda2,slack,speed_clipped,intervention
/// Frontier-dependent fields are empty when no frontier exists (gamma2 also
/// when the filter is disabled).
void write_trace_csv(const TickTrace& trace, std::ostream& out);

/// Flat key=value rendering of every metrics field plus seed and mode.
std::string format_summary(const EpisodeMetrics& metrics, const RunConfig& config);

/// Per-tick view handed to an optional observer (used by validation suites
/// to run checks against the live SDFs without re-simulating).
struct TickContext {
    int tick = 0;
    const OccupancyGrid& belief;
    const SignedDistanceField& obstacle_sdf;
    const std::optional<SignedDistanceField>& frontier_sdf;
    const FrontierClusterSet& clusters;
    Vec2 pos;
    Vec2 u_des;
    Vec2 u_safe;
    const FilterResult* filter = nullptr;  // null in baseline mode
    double dt = 0.1;
};

using TickObserver = std::function<void(const TickContext&)>;

struct EpisodeResult {
    TickTrace trace;
    EpisodeMetrics metrics;
};

/// Deterministic exploration episode: sense -> recompute SDFs/clusters/rho ->
/// select goal -> APF -> filter (or clip-only baseline) -> integrate.
/// Terminates early on ground-truth contact. The seed perturbs the start
/// position (within one cell, kept collision free) and the initial heading.
EpisodeResult run_episode(const RunConfig& config, const TickObserver& observer = nullptr);

/// Same, with a preloaded scenario (skips file I/O).
EpisodeResult run_episode(const RunConfig& config, const Scenario& scenario,
                          const TickObserver& observer = nullptr);

/// Resolve a scenario argument: an existing path is used as-is, otherwise
/// `<name>.txt` is looked up in ./scenarios and the compiled-in scenario dir.
std::string resolve_scenario_path(const std::string& scenario);

}  // namespace dualcbf
