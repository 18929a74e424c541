#pragma once

#include <vector>

#include "dualcbf/filter.hpp"
#include "dualcbf/grid.hpp"

namespace dualcbf::oracle {

// Deliberately simple and slow reference solvers. These live in the library
// rather than only in the test tree so the CLI `verify` subcommand can run
// the full oracle sweeps end to end.

struct OracleConfig {
    int dykstra_iters = 10000;
    double grid_search_step = 1e-4;
    double grid_search_bound = 0.4;  // velocity box half-width
};

struct DykstraResult {
    Vec2 point;
    bool converged = false;
    double max_violation = 0.0;
    int iterations = 0;
};

/// Dykstra's alternating projection with per-constraint correction vectors.
/// Converges to the exact Euclidean projection onto the intersection of
/// halfspaces; reports non-convergence when the final violation exceeds 1e-8.
DykstraResult dykstra_project(const Vec2& u_des,
                              const std::vector<HalfspaceConstraint>& constraints,
                              const OracleConfig& cfg = {});

struct SoftGridResult {
    Vec2 u;
    double delta = 0.0;
    double objective = 0.0;
};

/// Exhaustive minimization of 1/2 ||u - u_des||^2 + p/2 delta^2 subject to the
/// delta-relaxed constraints. For fixed delta the optimal u is the hard
/// projection (computed with Dykstra), so the scan is one-dimensional in delta.
SoftGridResult soft_qp_grid_search(const Vec2& u_des, const HalfspaceConstraint& c1,
                                   const HalfspaceConstraint& c2, double penalty,
                                   const OracleConfig& cfg = {});

/// All-pairs nearest-opposite-cell scan, exact; intended for grids <= 64x64.
/// Obstacle kind measures against occupied cells; Frontier kind runs its own
/// flood fill of unknown clusters (>= n_min cells) and measures against them.
SignedDistanceField brute_force_sdf(const OccupancyGrid& grid, SdfKind kind, int n_min = 25);

/// Same scan with the negative region given explicitly as a cluster set.
SignedDistanceField brute_force_frontier_sdf(const OccupancyGrid& grid,
                                             const FrontierClusterSet& clusters);

}  // namespace dualcbf::oracle
