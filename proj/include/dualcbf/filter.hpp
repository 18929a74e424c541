#pragma once

#include <optional>

#include "dualcbf/barrier.hpp"
#include "dualcbf/vec2.hpp"

namespace dualcbf {

enum class FilterCase {
    Nominal,         // both constraints already satisfied
    SingleObstacle,  // obstacle constraint active
    SingleFrontier,  // frontier constraint active
    Dual,            // both active, Gram system solved
    SoftFallback,    // parallel + infeasible, slack relaxation used
    FailSafeStop,    // violated constraint with unusable normal -> zero velocity
    ObstacleOnly,    // frontier absent, single-constraint path
};

const char* to_string(FilterCase c);

struct FilterParams {
    double penalty = 50.0;               // p, soft-QP slack weight
    double v_max = 0.20;                 // m/s
    double parallel_tolerance = 1e-6;    // on gram_det / (|g1|^2 |g2|^2), i.e. sin^2(theta)
    double degenerate_norm = 1e-9;       // ||g|| below this is unusable
    int bisection_iters = 20;
    double intervention_tolerance = 1e-6;  // m/s, pre-clip
};

struct FilterResult {
    Vec2 u_safe;
    FilterCase active_case = FilterCase::Nominal;
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double slack = 0.0;  // soft-QP delta*, zero otherwise
    bool speed_clipped = false;
    double h1 = 0.0;
    std::optional<double> h2;      // absent when no frontier constraint
    std::optional<double> gamma2;  // adaptive gain actually used
    double gram_det = 0.0;         // |g1|^2 |g2|^2 - (g1.g2)^2 when both constraints built
    double intervention_magnitude = 0.0;  // ||u_preclip - u_des||
};

/// Euclidean projection of u_des onto a single halfspace g^T u >= b.
/// The constraint must not be degenerate.
Vec2 project_single(const Vec2& u_des, const HalfspaceConstraint& c);

struct DualProjection {
    Vec2 u;
    FilterCase active_case = FilterCase::Nominal;
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double gram_det = 0.0;
    bool parallel = false;  // signaled instead of solving; caller routes
};

/// Closed-form projection onto the intersection of two halfspaces by KKT
/// active-set enumeration: accept u_des if feasible; try each single
/// projection and verify the other constraint; otherwise solve the 2x2 Gram
/// system, dropping a constraint whose multiplier comes out negative.
/// Signals `parallel` when gram_det < parallel_tolerance * |g1|^2 |g2|^2.
DualProjection project_dual(const Vec2& u_des, const HalfspaceConstraint& c1,
                            const HalfspaceConstraint& c2, const FilterParams& params);

struct ParallelProjection {
    Vec2 u;
    FilterCase active_case = FilterCase::Nominal;
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    bool feasible = true;  // false: anti-parallel with empty slab (soft-QP territory)
};

/// Parallel-normal handling: same-signed normals reduce to the tighter
/// constraint; anti-parallel normals form a slab that is projected onto
/// analytically when nonempty.
ParallelProjection project_parallel(const Vec2& u_des, const HalfspaceConstraint& c1,
                                    const HalfspaceConstraint& c2);

struct SoftSolution {
    Vec2 u;
    double delta = 0.0;
    double lambda1 = 0.0;
    double lambda2 = 0.0;
};

/// Soft relaxation for the infeasible case: minimize
/// 1/2 ||u - u_des||^2 + p/2 delta^2 subject to g_i^T u >= b_i - delta.
/// delta* found by bisection on the residual f(delta) = p*delta - sum of hard
/// projection multipliers at that relaxation, starting from the analytic
/// feasibility threshold so exact corner optima are returned exactly.
SoftSolution solve_soft(const Vec2& u_des, const HalfspaceConstraint& c1,
                        const HalfspaceConstraint& c2, const FilterParams& params);

/// Ball projection onto ||u|| <= v_max.
Vec2 speed_ceiling(const Vec2& u, double v_max);

/// The complete per-tick filter: build the obstacle constraint, add the
/// frontier constraint with the adaptive gain when a frontier exists, project
/// (dual -> parallel -> soft fallback), fail safe to zero velocity when a
/// violated constraint has an unusable normal, then apply the speed ceiling.
/// `frontier` and `rho` must be jointly present or jointly absent.
FilterResult apply_filter(const Vec2& u_des, const SdfSample& obstacle,
                          const std::optional<SdfSample>& frontier, std::optional<double> rho,
                          const BarrierSpec& obstacle_spec, const BarrierSpec& frontier_spec,
                          const GammaSchedule& schedule, const FilterParams& params);

struct KktReport {
    bool primal_feasible = false;   // g_i^T u - b_i >= -1e-9
    bool dual_feasible = false;     // lambda_i >= -1e-12
    bool complementary = false;     // |lambda_i (g_i^T u - b_i)| <= 1e-9
    bool stationary = false;        // ||u - u_des - lambda1 g1 - lambda2 g2|| <= 1e-9
    double worst_primal = 0.0;
    double worst_complementarity = 0.0;
    double stationarity_residual = 0.0;
    bool ok() const { return primal_feasible && dual_feasible && complementary && stationary; }
};

KktReport verify_kkt(const Vec2& u_des, const HalfspaceConstraint& c1,
                     const HalfspaceConstraint& c2, const DualProjection& result);

}  // namespace dualcbf
