#include "dualcbf/grid.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace dualcbf {

namespace {

constexpr double kUnreachable = 1e30;  // squared cell units, "no seed anywhere"

// 1D lower-envelope squared distance transform (Felzenszwalb & Huttenlocher,
// http://cs.brown.edu/people/pfelzens/dt/). Exact for integer-valued input,
// which is what makes the brute-force equivalence hold bitwise.
void dt_1d(const std::vector<double>& f, std::vector<double>& d, int n,
           std::vector<int>& v, std::vector<double>& z) {
    int k = 0;
    v[0] = 0;
    z[0] = -kUnreachable;
    z[1] = kUnreachable;
    for (int q = 1; q < n; ++q) {
        double s = ((f[q] + double(q) * q) - (f[v[k]] + double(v[k]) * v[k])) / (2.0 * (q - v[k]));
        while (s <= z[k]) {
            --k;
            s = ((f[q] + double(q) * q) - (f[v[k]] + double(v[k]) * v[k])) / (2.0 * (q - v[k]));
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = kUnreachable;
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
        while (z[k + 1] < q) ++k;
        const double dq = q - v[k];
        d[q] = dq * dq + f[v[k]];
    }
}

// Two-pass separable squared EDT over seed cells, in cell^2 units.
// Cells with no reachable seed end up >= kUnreachable.
std::vector<double> squared_edt(const std::vector<char>& seed, int w, int h) {
    std::vector<double> g(static_cast<std::size_t>(w) * h);
    const int n = std::max(w, h);
    std::vector<double> f(n), d(n);
    std::vector<int> v(n);
    std::vector<double> z(n + 1);

    // columns: distance to nearest seed row in the same column
    for (int x = 0; x < w; ++x) {
        for (int y = 0; y < h; ++y) f[y] = seed[static_cast<std::size_t>(y) * w + x] ? 0.0 : kUnreachable;
        dt_1d(f, d, h, v, z);
        for (int y = 0; y < h; ++y) g[static_cast<std::size_t>(y) * w + x] = d[y];
    }
    // rows: combine
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) f[x] = g[static_cast<std::size_t>(y) * w + x];
        dt_1d(f, d, w, v, z);
        for (int x = 0; x < w; ++x) g[static_cast<std::size_t>(y) * w + x] = d[x];
    }
    return g;
}

// Signed field from a negative-region mask: positive cells measure to the
// nearest mask cell, mask cells measure (negated) to the nearest non-mask
// cell. Empty opposite sets saturate at the grid-diagonal cap.
std::vector<double> signed_from_mask(const std::vector<char>& negative_mask, int w, int h,
                                     double resolution) {
    std::vector<char> positive_mask(negative_mask.size());
    bool any_neg = false, any_pos = false;
    for (std::size_t i = 0; i < negative_mask.size(); ++i) {
        positive_mask[i] = negative_mask[i] ? 0 : 1;
        (negative_mask[i] ? any_neg : any_pos) = true;
    }
    const double cap = distance_cap(w, h, resolution);
    std::vector<double> out(negative_mask.size());

    if (!any_neg || !any_pos) {
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = negative_mask[i] ? -cap : cap;
        return out;
    }
    const std::vector<double> d2_to_neg = squared_edt(negative_mask, w, h);
    const std::vector<double> d2_to_pos = squared_edt(positive_mask, w, h);
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = negative_mask[i] ? -resolution * std::sqrt(d2_to_pos[i])
                                  : resolution * std::sqrt(d2_to_neg[i]);
    }
    return out;
}

}  // namespace

double distance_cap(int width, int height, double resolution) {
    return resolution * std::sqrt(double(width) * width + double(height) * height);
}

OccupancyGrid OccupancyGrid::filled(int width, int height, double resolution, CellState fill,
                                    Vec2 origin) {
    if (width < 1 || height < 1) throw std::invalid_argument("grid dimensions must be >= 1");
    if (!(resolution > 0.0)) throw std::invalid_argument("grid resolution must be > 0");
    OccupancyGrid g;
    g.width = width;
    g.height = height;
    g.resolution = resolution;
    g.origin = origin;
    g.cells.assign(static_cast<std::size_t>(width) * height, fill);
    return g;
}

std::pair<int, int> OccupancyGrid::world_to_cell(const Vec2& p) const {
    const int x = static_cast<int>(std::llround((p.x - origin.x) / resolution));
    const int y = static_cast<int>(std::llround((p.y - origin.y) / resolution));
    return {x, y};
}

int OccupancyGrid::known_cells() const {
    int n = 0;
    for (const CellState c : cells) n += (c != CellState::Unknown);
    return n;
}

OccupancyGrid OccupancyGrid::parse(std::istream& in) {
    int w = 0, h = 0;
    double res = 0.0;
    std::string header;
    if (!std::getline(in, header)) throw std::runtime_error("grid: missing header line");
    {
        std::istringstream hs(header);
        if (!(hs >> w >> h >> res)) throw std::runtime_error("grid: header must be 'width height resolution'");
    }
    if (w < 1 || h < 1) throw std::runtime_error("grid: dimensions must be >= 1");
    if (!(res > 0.0)) throw std::runtime_error("grid: resolution must be > 0");
    OccupancyGrid g = filled(w, h, res, CellState::Unknown);
    for (int y = 0; y < h; ++y) {
        std::string row;
        if (!std::getline(in, row)) throw std::runtime_error("grid: expected " + std::to_string(h) + " rows");
        if (!row.empty() && row.back() == '\r') row.pop_back();
        if (static_cast<int>(row.size()) != w)
            throw std::runtime_error("grid: row " + std::to_string(y) + " has " +
                                     std::to_string(row.size()) + " chars, expected " + std::to_string(w));
        for (int x = 0; x < w; ++x) {
            switch (row[x]) {
                case '#': g.at(x, y) = CellState::Occupied; break;
                case '.': g.at(x, y) = CellState::Free; break;
                case '?': g.at(x, y) = CellState::Unknown; break;
                default:
                    throw std::runtime_error(std::string("grid: invalid cell char '") + row[x] + "'");
            }
        }
    }
    return g;
}

void OccupancyGrid::write(std::ostream& out) const {
    out << width << ' ' << height << ' ' << resolution << '\n';
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const CellState c = at(x, y);
            out << (c == CellState::Occupied ? '#' : c == CellState::Free ? '.' : '?');
        }
        out << '\n';
    }
}

SignedDistanceField compute_obstacle_sdf(const OccupancyGrid& grid) {
    std::vector<char> occupied(grid.cells.size());
    for (std::size_t i = 0; i < grid.cells.size(); ++i)
        occupied[i] = grid.cells[i] == CellState::Occupied;
    SignedDistanceField sdf;
    sdf.width = grid.width;
    sdf.height = grid.height;
    sdf.resolution = grid.resolution;
    sdf.origin = grid.origin;
    sdf.kind = SdfKind::Obstacle;
    sdf.values = signed_from_mask(occupied, grid.width, grid.height, grid.resolution);
    return sdf;
}

FrontierClusterSet extract_frontier_clusters(const OccupancyGrid& grid, int n_min) {
    if (n_min < 1) throw std::invalid_argument("n_min must be >= 1");
    FrontierClusterSet set;
    std::vector<char> visited(grid.cells.size(), 0);
    std::vector<std::pair<int, int>> stack;
    for (int y0 = 0; y0 < grid.height; ++y0) {
        for (int x0 = 0; x0 < grid.width; ++x0) {
            const std::size_t i0 = static_cast<std::size_t>(y0) * grid.width + x0;
            if (visited[i0] || grid.cells[i0] != CellState::Unknown) continue;
            FrontierCluster cluster;
            stack.clear();
            stack.emplace_back(x0, y0);
            visited[i0] = 1;
            while (!stack.empty()) {
                const auto [x, y] = stack.back();
                stack.pop_back();
                cluster.cells.emplace_back(x, y);
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        if (dx == 0 && dy == 0) continue;
                        const int nx = x + dx, ny = y + dy;
                        if (!grid.in_bounds(nx, ny)) continue;
                        const std::size_t ni = static_cast<std::size_t>(ny) * grid.width + nx;
                        if (visited[ni] || grid.cells[ni] != CellState::Unknown) continue;
                        visited[ni] = 1;
                        stack.emplace_back(nx, ny);
                    }
                }
            }
            if (cluster.size() < n_min) continue;
            Vec2 sum;
            for (const auto& [cx, cy] : cluster.cells) sum += grid.cell_center(cx, cy);
            cluster.centroid = sum / static_cast<double>(cluster.size());
            set.clusters.push_back(std::move(cluster));
        }
    }
    return set;
}

std::optional<SignedDistanceField> compute_frontier_sdf(const OccupancyGrid& grid,
                                                        const FrontierClusterSet& clusters) {
    if (clusters.empty()) return std::nullopt;
    std::vector<char> in_cluster(grid.cells.size(), 0);
    for (const FrontierCluster& c : clusters.clusters)
        for (const auto& [x, y] : c.cells)
            in_cluster[static_cast<std::size_t>(y) * grid.width + x] = 1;
    SignedDistanceField sdf;
    sdf.width = grid.width;
    sdf.height = grid.height;
    sdf.resolution = grid.resolution;
    sdf.origin = grid.origin;
    sdf.kind = SdfKind::Frontier;
    sdf.values = signed_from_mask(in_cluster, grid.width, grid.height, grid.resolution);
    return sdf;
}

Vec2 cell_gradient_raw(const SignedDistanceField& sdf, int x, int y) {
    const double r = sdf.resolution;
    double gx = 0.0, gy = 0.0;
    if (sdf.width > 1) {
        const int xm = std::max(x - 1, 0);
        const int xp = std::min(x + 1, sdf.width - 1);
        gx = (sdf.at(xp, y) - sdf.at(xm, y)) / ((xp - xm) * r);
    }
    if (sdf.height > 1) {
        const int ym = std::max(y - 1, 0);
        const int yp = std::min(y + 1, sdf.height - 1);
        gy = (sdf.at(x, yp) - sdf.at(x, ym)) / ((yp - ym) * r);
    }
    return {gx, gy};
}

SdfSample sample(const SignedDistanceField& sdf, const Vec2& world_point) {
    // continuous cell coordinates, clamped to the cell-center lattice
    const double ux = std::clamp((world_point.x - sdf.origin.x) / sdf.resolution, 0.0,
                                 static_cast<double>(sdf.width - 1));
    const double uy = std::clamp((world_point.y - sdf.origin.y) / sdf.resolution, 0.0,
                                 static_cast<double>(sdf.height - 1));
    const int x0 = std::min(static_cast<int>(ux), std::max(sdf.width - 2, 0));
    const int y0 = std::min(static_cast<int>(uy), std::max(sdf.height - 2, 0));
    const int x1 = std::min(x0 + 1, sdf.width - 1);
    const int y1 = std::min(y0 + 1, sdf.height - 1);
    const double fx = ux - x0;
    const double fy = uy - y0;

    SdfSample s;
    s.value = (1.0 - fx) * (1.0 - fy) * sdf.at(x0, y0) + fx * (1.0 - fy) * sdf.at(x1, y0) +
              (1.0 - fx) * fy * sdf.at(x0, y1) + fx * fy * sdf.at(x1, y1);

    const int cx = static_cast<int>(std::llround(ux));
    const int cy = static_cast<int>(std::llround(uy));
    const Vec2 raw = cell_gradient_raw(sdf, cx, cy);
    const double n = raw.norm();
    if (n > 1e-6) {
        s.gradient = raw / n;
    } else {
        s.gradient = {};
        s.degenerate = true;
    }
    return s;
}

double uncertainty_density(const OccupancyGrid& grid, const Vec2& center, double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("uncertainty_density: radius must be > 0");
    const auto [cx, cy] = grid.world_to_cell(center);
    const int span = static_cast<int>(std::ceil(radius / grid.resolution)) + 1;
    const double r2 = radius * radius;
    int unknown = 0, total = 0;
    for (int y = std::max(cy - span, 0); y <= std::min(cy + span, grid.height - 1); ++y) {
        for (int x = std::max(cx - span, 0); x <= std::min(cx + span, grid.width - 1); ++x) {
            if ((grid.cell_center(x, y) - center).squared_norm() > r2) continue;
            ++total;
            unknown += (grid.at(x, y) == CellState::Unknown);
        }
    }
    return total == 0 ? 0.0 : static_cast<double>(unknown) / total;
}

}  // namespace dualcbf
