#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dualcbf/vec2.hpp"

namespace dualcbf {

enum class CellState : std::uint8_t { Unknown, Free, Occupied };

/// 2D occupancy grid, row-major with index = y * width + x. `origin` is the
/// world position of the center of cell (0,0); cell (x,y) is the axis-aligned
/// square of side `resolution` centered at origin + (x,y) * resolution.
struct OccupancyGrid {
    int width = 0;
    int height = 0;
    double resolution = 1.0;  // meters per cell
    Vec2 origin;              // world coords of cell (0,0) center
    std::vector<CellState> cells;

    static OccupancyGrid filled(int width, int height, double resolution,
                                CellState fill, Vec2 origin = {});

    CellState at(int x, int y) const { return cells[static_cast<std::size_t>(y) * width + x]; }
    CellState& at(int x, int y) { return cells[static_cast<std::size_t>(y) * width + x]; }
    bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }

    Vec2 cell_center(int x, int y) const {
        return {origin.x + x * resolution, origin.y + y * resolution};
    }

    /// Cell whose square contains the world point (nearest center), unclamped.
    std::pair<int, int> world_to_cell(const Vec2& p) const;

    int known_cells() const;  // Free + Occupied

    /// Text format: first line "width height resolution", then `height` rows of
    /// width chars from {#=occupied, .=free, ?=unknown}; the first data row is
    /// the minimum-y row. Throws std::runtime_error on malformed input.
    static OccupancyGrid parse(std::istream& in);
    void write(std::ostream& out) const;
};

enum class SdfKind { Obstacle, Frontier };

/// Per-cell signed Euclidean distances (meters), cell-center metric.
/// Obstacle kind: > 0 on free/unknown cells, < 0 on occupied cells.
/// Frontier kind: > 0 outside significant unknown clusters, < 0 inside them.
struct SignedDistanceField {
    int width = 0;
    int height = 0;
    double resolution = 1.0;
    Vec2 origin;
    SdfKind kind = SdfKind::Obstacle;
    std::vector<double> values;

    double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
    double& at(int x, int y) { return values[static_cast<std::size_t>(y) * width + x]; }
};

/// Continuous-space SDF evaluation: bilinear value plus a unit gradient.
/// `degenerate` is set on plateaus where no reliable direction exists.
struct SdfSample {
    double value = 0.0;
    Vec2 gradient;  // unit length when !degenerate
    bool degenerate = false;
};

struct FrontierCluster {
    std::vector<std::pair<int, int>> cells;  // (x, y), scan-order discovery
    Vec2 centroid;                           // mean of member cell centers, world meters
    int size() const { return static_cast<int>(cells.size()); }
};

struct FrontierClusterSet {
    std::vector<FrontierCluster> clusters;
    bool empty() const { return clusters.empty(); }
};

/// Saturation value used when a cell has no opposite-sign cell to measure to:
/// the grid diagonal in meters.
double distance_cap(int width, int height, double resolution);

/// Exact signed Euclidean distance transform of the occupied set. Unknown
/// cells count as non-obstacle; the frontier barrier owns unknown-space risk.
SignedDistanceField compute_obstacle_sdf(const OccupancyGrid& grid);

/// Connected components of Unknown cells (8-connectivity) with at least
/// n_min cells, in row-major discovery order. Throws if n_min < 1.
FrontierClusterSet extract_frontier_clusters(const OccupancyGrid& grid, int n_min);

/// Signed EDT with the cluster cells as the negative region, or nullopt when
/// the cluster set is empty (map fully explored; the constraint is dropped).
std::optional<SignedDistanceField> compute_frontier_sdf(const OccupancyGrid& grid,
                                                        const FrontierClusterSet& clusters);

/// Raw central-difference gradient at a cell (one-sided at the grid border),
/// in meters/meter. Not normalized.
Vec2 cell_gradient_raw(const SignedDistanceField& sdf, int x, int y);

/// Bilinear value plus normalized central-difference gradient at the cell
/// enclosing the point. Out-of-bounds points clamp to the boundary.
SdfSample sample(const SignedDistanceField& sdf, const Vec2& world_point);

/// Fraction of cell centers within the disc that are Unknown; 0 when the disc
/// covers no cell centers. Throws if radius <= 0.
double uncertainty_density(const OccupancyGrid& grid, const Vec2& center, double radius);

}  // namespace dualcbf
