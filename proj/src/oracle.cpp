#include "dualcbf/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dualcbf::oracle {

namespace {

Vec2 halfspace_projection(const Vec2& p, const HalfspaceConstraint& c) {
    const double slack = c.normal.dot(p) - c.offset;
    if (slack >= 0.0) return p;
    return p - (slack / c.normal.squared_norm()) * c.normal;
}

double worst_violation(const Vec2& p, const std::vector<HalfspaceConstraint>& cs) {
    double worst = 0.0;
    for (const auto& c : cs) worst = std::max(worst, c.offset - c.normal.dot(p));
    return worst;
}

// Brute-force signed distance against an explicit negative-region mask.
std::vector<double> scan_mask(const std::vector<char>& negative, int w, int h, double res) {
    std::vector<double> out(negative.size());
    const double cap = res * std::sqrt(double(w) * w + double(h) * h);
    bool any_neg = false, any_pos = false;
    for (const char m : negative) (m ? any_neg : any_pos) = true;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            const bool want_neg_cells = !negative[i];
            if ((want_neg_cells && !any_neg) || (!want_neg_cells && !any_pos)) {
                out[i] = negative[i] ? -cap : cap;
                continue;
            }
            long long best = std::numeric_limits<long long>::max();
            for (int yy = 0; yy < h; ++yy) {
                for (int xx = 0; xx < w; ++xx) {
                    if (static_cast<bool>(negative[static_cast<std::size_t>(yy) * w + xx]) !=
                        want_neg_cells)
                        continue;
                    const long long dx = xx - x, dy = yy - y;
                    best = std::min(best, dx * dx + dy * dy);
                }
            }
            const double dist = res * std::sqrt(static_cast<double>(best));
            out[i] = negative[i] ? -dist : dist;
        }
    }
    return out;
}

}  // namespace

DykstraResult dykstra_project(const Vec2& u_des,
                              const std::vector<HalfspaceConstraint>& constraints,
                              const OracleConfig& cfg) {
    DykstraResult res;
    Vec2 x = u_des;
    std::vector<Vec2> corrections(constraints.size());
    int it = 0;
    for (; it < cfg.dykstra_iters; ++it) {
        const Vec2 x_before = x;
        for (std::size_t i = 0; i < constraints.size(); ++i) {
            const Vec2 y = x + corrections[i];
            const Vec2 projected = halfspace_projection(y, constraints[i]);
            corrections[i] = y - projected;
            x = projected;
        }
        if ((x - x_before).norm() < 1e-15 && worst_violation(x, constraints) <= 1e-8) break;
    }
    res.point = x;
    res.iterations = it;
    res.max_violation = worst_violation(x, constraints);
    res.converged = res.max_violation <= 1e-8;
    return res;
}

SoftGridResult soft_qp_grid_search(const Vec2& u_des, const HalfspaceConstraint& c1,
                                   const HalfspaceConstraint& c2, double penalty,
                                   const OracleConfig& cfg) {
    // Scan delta up to the relaxation at which u_des itself becomes feasible;
    // the optimum can never need more slack than that.
    const double delta_max = std::max({0.0, c1.offset - c1.normal.dot(u_des),
                                       c2.offset - c2.normal.dot(u_des)}) +
                             2.0 * cfg.grid_search_step;
    SoftGridResult best;
    best.objective = std::numeric_limits<double>::infinity();
    OracleConfig inner = cfg;
    inner.dykstra_iters = std::min(cfg.dykstra_iters, 2000);
    for (double delta = 0.0; delta <= delta_max; delta += cfg.grid_search_step) {
        std::vector<HalfspaceConstraint> relaxed = {c1, c2};
        relaxed[0].offset -= delta;
        relaxed[1].offset -= delta;
        const DykstraResult dr = dykstra_project(u_des, relaxed, inner);
        if (!dr.converged) continue;  // relaxation still infeasible
        const double obj =
            0.5 * (dr.point - u_des).squared_norm() + 0.5 * penalty * delta * delta;
        if (obj < best.objective) {
            best.objective = obj;
            best.u = dr.point;
            best.delta = delta;
        }
    }
    return best;
}

SignedDistanceField brute_force_sdf(const OccupancyGrid& grid, SdfKind kind, int n_min) {
    if (grid.width > 64 || grid.height > 64)
        throw std::invalid_argument("brute_force_sdf: grid too large for the quadratic scan");
    SignedDistanceField sdf;
    sdf.width = grid.width;
    sdf.height = grid.height;
    sdf.resolution = grid.resolution;
    sdf.origin = grid.origin;
    sdf.kind = kind;

    std::vector<char> negative(grid.cells.size(), 0);
    if (kind == SdfKind::Obstacle) {
        for (std::size_t i = 0; i < grid.cells.size(); ++i)
            negative[i] = grid.cells[i] == CellState::Occupied;
    } else {
        // Independent flood fill of unknown clusters (8-connectivity).
        std::vector<char> seen(grid.cells.size(), 0);
        for (int y0 = 0; y0 < grid.height; ++y0) {
            for (int x0 = 0; x0 < grid.width; ++x0) {
                const std::size_t i0 = static_cast<std::size_t>(y0) * grid.width + x0;
                if (seen[i0] || grid.cells[i0] != CellState::Unknown) continue;
                std::vector<std::pair<int, int>> component, frontier{{x0, y0}};
                seen[i0] = 1;
                while (!frontier.empty()) {
                    const auto [x, y] = frontier.back();
                    frontier.pop_back();
                    component.emplace_back(x, y);
                    for (int dy = -1; dy <= 1; ++dy)
                        for (int dx = -1; dx <= 1; ++dx) {
                            const int nx = x + dx, ny = y + dy;
                            if ((dx == 0 && dy == 0) || !grid.in_bounds(nx, ny)) continue;
                            const std::size_t ni = static_cast<std::size_t>(ny) * grid.width + nx;
                            if (seen[ni] || grid.cells[ni] != CellState::Unknown) continue;
                            seen[ni] = 1;
                            frontier.emplace_back(nx, ny);
                        }
                }
                if (static_cast<int>(component.size()) < n_min) continue;
                for (const auto& [x, y] : component)
                    negative[static_cast<std::size_t>(y) * grid.width + x] = 1;
            }
        }
    }
    sdf.values = scan_mask(negative, grid.width, grid.height, grid.resolution);
    return sdf;
}

SignedDistanceField brute_force_frontier_sdf(const OccupancyGrid& grid,
                                             const FrontierClusterSet& clusters) {
    if (grid.width > 64 || grid.height > 64)
        throw std::invalid_argument("brute_force_frontier_sdf: grid too large");
    std::vector<char> negative(grid.cells.size(), 0);
    for (const auto& cluster : clusters.clusters)
        for (const auto& [x, y] : cluster.cells)
            negative[static_cast<std::size_t>(y) * grid.width + x] = 1;
    SignedDistanceField sdf;
    sdf.width = grid.width;
    sdf.height = grid.height;
    sdf.resolution = grid.resolution;
    sdf.origin = grid.origin;
    sdf.kind = SdfKind::Frontier;
    sdf.values = scan_mask(negative, grid.width, grid.height, grid.resolution);
    return sdf;
}

}  // namespace dualcbf::oracle
