#include <doctest.h>

#include <cmath>

#include "dualcbf/nominal.hpp"
#include "dualcbf/rng.hpp"

using namespace dualcbf;

namespace {

FrontierCluster cluster_at(double x, double y, int size) {
    FrontierCluster c;
    c.centroid = {x, y};
    c.cells.resize(size);
    return c;
}

}  // namespace

TEST_CASE("goal selection: empty cluster set yields no goal") {
    CHECK(!select_goal(FrontierClusterSet{}, {0.0, 0.0}).has_value());
}

TEST_CASE("goal selection: nearest centroid wins") {
    FrontierClusterSet set;
    set.clusters.push_back(cluster_at(5.0, 0.0, 30));
    set.clusters.push_back(cluster_at(3.0, 0.0, 30));
    const auto goal = select_goal(set, {0.0, 0.0});
    REQUIRE(goal.has_value());
    CHECK(goal->position.x == 3.0);
}

TEST_CASE("goal selection: equidistant tie broken by cluster size, then scan order") {
    FrontierClusterSet set;
    set.clusters.push_back(cluster_at(2.0, 0.0, 30));
    set.clusters.push_back(cluster_at(-2.0, 0.0, 40));
    const auto goal = select_goal(set, {0.0, 0.0});
    REQUIRE(goal.has_value());
    CHECK(goal->position.x == -2.0);
    CHECK(goal->source_cluster_size == 40);

    set.clusters[1].cells.resize(30);  // equal size: first in scan order wins
    const auto goal2 = select_goal(set, {0.0, 0.0});
    CHECK(goal2->position.x == 2.0);
}

TEST_CASE("APF saturates pure attraction at the nominal cap") {
    ApfParams params;
    params.k_att = 1.0;
    params.v_nom_cap = 0.2;
    const SdfSample far{10.0, {1.0, 0.0}, false};
    const Vec2 u = apf_velocity({0.0, 0.0}, Goal{{1.0, 0.0}, 30}, far, params);
    CHECK(u.x == doctest::Approx(0.2));
    CHECK(u.y == doctest::Approx(0.0));
}

TEST_CASE("APF is zero at the goal with no obstacle in range") {
    ApfParams params;
    const SdfSample far{10.0, {1.0, 0.0}, false};
    const Vec2 u = apf_velocity({2.0, 3.0}, Goal{{2.0, 3.0}, 30}, far, params);
    CHECK(u.norm() == 0.0);
}

TEST_CASE("repulsion vanishes exactly at the influence radius") {
    ApfParams params;
    const Goal goal{{5.0, 0.0}, 30};
    const SdfSample at_d0{params.d0, {0.0, 1.0}, false};
    const SdfSample beyond{params.d0 + 0.2, {0.0, 1.0}, false};
    const Vec2 u_at = apf_velocity({0.0, 0.0}, goal, at_d0, params);
    const Vec2 u_beyond = apf_velocity({0.0, 0.0}, goal, beyond, params);
    CHECK(u_at.y == 0.0);
    CHECK((u_at - u_beyond).norm() == 0.0);
}

TEST_CASE("repulsion is continuous as phi approaches the influence radius") {
    ApfParams params;
    const Goal goal{{5.0, 0.0}, 30};
    const SdfSample just_inside{params.d0 - 1e-9, {0.0, 1.0}, false};
    const Vec2 u = apf_velocity({0.0, 0.0}, goal, just_inside, params);
    CHECK(std::abs(u.y) < 1e-8);
}

TEST_CASE("APF output norm never exceeds the cap") {
    ApfParams params;
    Rng rng(42);
    for (int i = 0; i < 500; ++i) {
        const double a = rng.uniform(0.0, 6.28);
        const SdfSample obs{rng.uniform(-0.2, 2.0), {std::cos(a), std::sin(a)}, false};
        const Goal goal{{rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0)}, 30};
        const Vec2 u = apf_velocity({rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)}, goal, obs,
                                    params);
        CHECK(u.norm() <= params.v_nom_cap + 1e-12);
    }
}

TEST_CASE("with no obstacle in range the command points at the goal") {
    ApfParams params;
    Rng rng(43);
    for (int i = 0; i < 200; ++i) {
        const Vec2 pos{rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
        const Vec2 target{rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
        if ((target - pos).norm() < 1e-6) continue;
        const SdfSample far{params.d0 + 1.0, {1.0, 0.0}, false};
        const Vec2 u = apf_velocity(pos, Goal{target, 10}, far, params);
        const Vec2 dir = (target - pos).normalized();
        CHECK(std::abs(u.x * dir.y - u.y * dir.x) < 1e-12);  // parallel
        CHECK(u.dot(dir) >= 0.0);
    }
}

TEST_CASE("inside an obstacle the repulsion pushes outward at the cap") {
    ApfParams params;
    const SdfSample inside{-0.05, {0.0, 1.0}, false};
    const Vec2 u = apf_velocity({0.0, 0.0}, Goal{{0.0, 0.0}, 10}, inside, params);
    CHECK(u.y == doctest::Approx(params.v_nom_cap));
}
