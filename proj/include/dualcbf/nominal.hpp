#pragma once

#include <optional>

#include "dualcbf/grid.hpp"
#include "dualcbf/vec2.hpp"

namespace dualcbf {

struct ApfParams {
    double k_att = 0.8;       // 1/s
    double k_rep = 0.05;      // m^2/s
    double d0 = 1.0;          // m, repulsion influence radius
    double v_nom_cap = 0.2;   // m/s
};

struct Goal {
    Vec2 position;  // selected frontier cluster centroid
    int source_cluster_size = 0;
};

/// Nearest cluster centroid; ties broken by larger cluster, then scan order.
std::optional<Goal> select_goal(const FrontierClusterSet& clusters, const Vec2& pos);

/// Attractive pull toward the goal plus Khatib-style repulsion from the
/// obstacle SDF inside d0, both saturated to v_nom_cap.
Vec2 apf_velocity(const Vec2& pos, const Goal& goal, const SdfSample& obstacle,
                  const ApfParams& params);

}  // namespace dualcbf
