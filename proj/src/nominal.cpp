#include "dualcbf/nominal.hpp"

#include <cmath>

namespace dualcbf {

namespace {

Vec2 saturate(const Vec2& v, double cap) {
    const double n = v.norm();
    return n > cap ? v * (cap / n) : v;
}

}  // namespace

std::optional<Goal> select_goal(const FrontierClusterSet& clusters, const Vec2& pos) {
    if (clusters.empty()) return std::nullopt;
    int best = 0;
    double best_dist = distance(clusters.clusters[0].centroid, pos);
    for (int i = 1; i < static_cast<int>(clusters.clusters.size()); ++i) {
        const double d = distance(clusters.clusters[i].centroid, pos);
        if (d < best_dist ||
            (d == best_dist && clusters.clusters[i].size() > clusters.clusters[best].size())) {
            best = i;
            best_dist = d;
        }
    }
    return Goal{clusters.clusters[best].centroid, clusters.clusters[best].size()};
}

Vec2 apf_velocity(const Vec2& pos, const Goal& goal, const SdfSample& obstacle,
                  const ApfParams& params) {
    const Vec2 u_att = saturate(params.k_att * (goal.position - pos), params.v_nom_cap);

    Vec2 u_rep;
    const double phi = obstacle.value;
    if (!obstacle.degenerate && phi < params.d0) {
        if (phi <= 0.0) {
            // Inside an obstacle cell: push straight out at full speed.
            u_rep = params.v_nom_cap * obstacle.gradient;
        } else {
            const double mag = params.k_rep * (1.0 / phi - 1.0 / params.d0) / (phi * phi);
            u_rep = mag * obstacle.gradient;
        }
    }
    return saturate(u_att + u_rep, params.v_nom_cap);
}

}  // namespace dualcbf
