#pragma once

#include <sstream>
#include <string>

#include "dualcbf/grid.hpp"
#include "dualcbf/rng.hpp"

namespace test_util {

inline dualcbf::OccupancyGrid grid_from_string(const std::string& text) {
    std::istringstream in(text);
    return dualcbf::OccupancyGrid::parse(in);
}

// Random mixed grid: mostly free with scattered occupied and unknown cells.
inline dualcbf::OccupancyGrid random_grid(dualcbf::Rng& rng, int w, int h,
                                          double resolution = 0.25) {
    using namespace dualcbf;
    OccupancyGrid g = OccupancyGrid::filled(w, h, resolution, CellState::Free);
    const int occupied = rng.uniform_int(1, std::max(1, w * h / 10));
    for (int i = 0; i < occupied; ++i)
        g.at(rng.uniform_int(0, w - 1), rng.uniform_int(0, h - 1)) = CellState::Occupied;
    const int unknown = rng.uniform_int(0, std::max(1, w * h / 8));
    for (int i = 0; i < unknown; ++i)
        g.at(rng.uniform_int(0, w - 1), rng.uniform_int(0, h - 1)) = CellState::Unknown;
    return g;
}

}  // namespace test_util
