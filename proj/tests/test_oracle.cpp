#include <doctest.h>

#include <cmath>

#include "dualcbf/oracle.hpp"
#include "dualcbf/verification.hpp"
#include "test_util.hpp"

using namespace dualcbf;

TEST_CASE("one-constraint Dykstra is a plain halfspace projection") {
    HalfspaceConstraint c;
    c.normal = {0.6, 0.8};
    c.offset = 0.3;
    const auto dy = oracle::dykstra_project({0.2, -0.4}, {c});
    CHECK(dy.converged);
    const Vec2 direct = project_single({0.2, -0.4}, c);
    CHECK((dy.point - direct).norm() < 1e-10);
}

TEST_CASE("Dykstra solves the orthogonal corner") {
    HalfspaceConstraint c1, c2;
    c1.normal = {1.0, 0.0};
    c1.offset = 1.0;
    c2.normal = {0.0, 1.0};
    c2.offset = 1.0;
    const auto dy = oracle::dykstra_project({0.0, 0.0}, {c1, c2});
    CHECK(dy.converged);
    CHECK(dy.point.x == doctest::Approx(1.0));
    CHECK(dy.point.y == doctest::Approx(1.0));
}

TEST_CASE("Dykstra output violates each constraint by at most 1e-8") {
    const auto instances = verification::make_dual_instances(300, 1001);
    for (const auto& inst : instances) {
        const auto dy = oracle::dykstra_project(inst.u_des, {inst.c1, inst.c2});
        CHECK(dy.max_violation <= 1e-8);
    }
}

TEST_CASE("Dykstra reports non-convergence on an empty intersection") {
    HalfspaceConstraint c1, c2;
    c1.normal = {1.0, 0.0};
    c1.offset = 1.0;
    c2.normal = {-1.0, 0.0};
    c2.offset = 1.0;  // x >= 1 and x <= -1
    const auto dy = oracle::dykstra_project({0.0, 0.0}, {c1, c2});
    CHECK(!dy.converged);
}

TEST_CASE("grid search confirms the symmetric soft instance") {
    HalfspaceConstraint c1, c2;
    c1.normal = {1.0, 0.0};
    c1.offset = 1.0;
    c2.normal = {-1.0, 0.0};
    c2.offset = 1.0;
    const auto res = oracle::soft_qp_grid_search({0.0, 0.0}, c1, c2, 10.0);
    CHECK(res.delta == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(res.u.norm() < 1e-6);
}

TEST_CASE("grid search keeps delta at zero when u_des is feasible") {
    HalfspaceConstraint c1, c2;
    c1.normal = {1.0, 0.0};
    c1.offset = -0.5;
    c2.normal = {0.0, 1.0};
    c2.offset = -0.5;
    const auto res = oracle::soft_qp_grid_search({0.0, 0.0}, c1, c2, 10.0);
    CHECK(res.delta == 0.0);
    CHECK(res.u.norm() == 0.0);
}

TEST_CASE("brute-force SDF agrees with the transform on the 3x3 obstacle grid") {
    OccupancyGrid g = OccupancyGrid::filled(3, 3, 1.0, CellState::Free);
    g.at(1, 1) = CellState::Occupied;
    const auto fast = compute_obstacle_sdf(g);
    const auto slow = oracle::brute_force_sdf(g, SdfKind::Obstacle);
    for (std::size_t i = 0; i < fast.values.size(); ++i) CHECK(fast.values[i] == slow.values[i]);
}

TEST_CASE("brute-force SDF caps an all-free grid") {
    const OccupancyGrid g = OccupancyGrid::filled(6, 4, 0.5, CellState::Free);
    const auto slow = oracle::brute_force_sdf(g, SdfKind::Obstacle);
    for (const double v : slow.values) CHECK(v == distance_cap(6, 4, 0.5));
}

TEST_CASE("EDT equals brute force bitwise on 20 seeded 32x32 grids") {
    const auto sweep = verification::run_edt_sweep(20, 32, 9001);
    CHECK(sweep.mismatched_grids == 0);
}

TEST_CASE("frontier brute force with internal clustering matches the grid module") {
    Rng rng(4321);
    for (int i = 0; i < 5; ++i) {
        const OccupancyGrid g = test_util::random_grid(rng, 24, 24);
        const FrontierClusterSet set = extract_frontier_clusters(g, 4);
        const auto fast = compute_frontier_sdf(g, set);
        if (!fast) continue;
        const auto slow = oracle::brute_force_sdf(g, SdfKind::Frontier, 4);
        for (std::size_t j = 0; j < fast->values.size(); ++j)
            REQUIRE(fast->values[j] == slow.values[j]);
    }
}

TEST_CASE("brute force rejects oversized grids") {
    const OccupancyGrid g = OccupancyGrid::filled(65, 65, 1.0, CellState::Free);
    CHECK_THROWS(oracle::brute_force_sdf(g, SdfKind::Obstacle));
}
