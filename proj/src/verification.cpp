#include "dualcbf/verification.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>

#include "dualcbf/oracle.hpp"
#include "dualcbf/rng.hpp"

namespace dualcbf::verification {

namespace {

constexpr double kPi = 3.14159265358979323846;

OccupancyGrid random_grid(Rng& rng, int max_size) {
    const int w = rng.uniform_int(4, max_size);
    const int h = rng.uniform_int(4, max_size);
    OccupancyGrid g = OccupancyGrid::filled(w, h, 0.25, CellState::Free);
    const int occupied = rng.uniform_int(0, std::max(1, w * h / 8));
    for (int i = 0; i < occupied; ++i)
        g.at(rng.uniform_int(0, w - 1), rng.uniform_int(0, h - 1)) = CellState::Occupied;
    const int unknown = rng.uniform_int(0, std::max(1, w * h / 6));
    for (int i = 0; i < unknown; ++i)
        g.at(rng.uniform_int(0, w - 1), rng.uniform_int(0, h - 1)) = CellState::Unknown;
    return g;
}

}  // namespace

std::vector<SweepInstance> make_dual_instances(int count, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<SweepInstance> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) {
        const double alpha = rng.uniform(0.0, 2.0 * kPi);
        const double theta = rng.uniform(10.0, 170.0) * kPi / 180.0;
        const double n1 = rng.uniform(0.1, 2.0);
        const double n2 = rng.uniform(0.1, 2.0);
        SweepInstance inst;
        inst.c1.normal = {n1 * std::cos(alpha), n1 * std::sin(alpha)};
        inst.c2.normal = {n2 * std::cos(alpha + theta), n2 * std::sin(alpha + theta)};
        inst.c1.offset = rng.uniform(-1.0, 1.0);
        inst.c2.offset = rng.uniform(-1.0, 1.0);
        inst.u_des = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
        out.push_back(inst);
    }
    return out;
}

DualSweepResult run_dual_sweep(int count, std::uint64_t seed, double tolerance) {
    const std::vector<SweepInstance> instances = make_dual_instances(count, seed);
    DualSweepResult res;
    res.count = count;
    FilterParams params;

    const auto t0 = std::chrono::steady_clock::now();
    for (const SweepInstance& inst : instances) {
        const DualProjection dp = project_dual(inst.u_des, inst.c1, inst.c2, params);
        const oracle::DykstraResult dy = oracle::dykstra_project(inst.u_des, {inst.c1, inst.c2});
        const double err =
            std::max(std::abs(dp.u.x - dy.point.x), std::abs(dp.u.y - dy.point.y));
        res.max_error = std::max(res.max_error, err);
        if (err > tolerance || !dy.converged) ++res.mismatches;
        if (!verify_kkt(inst.u_des, inst.c1, inst.c2, dp).ok()) ++res.kkt_failures;
    }
    res.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    // Filter latency on synthetic SDF samples (one per instance).
    {
        Rng rng(seed + 1);
        const BarrierSpec obstacle_spec;
        const BarrierSpec frontier_spec;
        const GammaSchedule schedule;
        std::vector<double> latencies;
        latencies.reserve(instances.size());
        volatile double sink = 0.0;
        for (const SweepInstance& inst : instances) {
            SdfSample obs{rng.uniform(0.0, 1.2),
                          Vec2{std::cos(inst.c1.offset), std::sin(inst.c1.offset)}, false};
            SdfSample frontier{rng.uniform(0.0, 1.2),
                               Vec2{std::cos(inst.c2.offset), std::sin(inst.c2.offset)}, false};
            const double rho = rng.uniform(0.0, 1.0);
            const auto f0 = std::chrono::steady_clock::now();
            const FilterResult fr = apply_filter(inst.u_des, obs, frontier, rho, obstacle_spec,
                                                 frontier_spec, schedule, params);
            const auto f1 = std::chrono::steady_clock::now();
            sink = sink + fr.u_safe.x;
            latencies.push_back(std::chrono::duration<double, std::micro>(f1 - f0).count());
        }
        std::sort(latencies.begin(), latencies.end());
        if (!latencies.empty()) res.median_filter_latency_us = latencies[latencies.size() / 2];
    }
    return res;
}

EdtSweepResult run_edt_sweep(int grids, int max_size, std::uint64_t seed) {
    Rng rng(seed);
    EdtSweepResult res;
    res.grids = grids;
    for (int i = 0; i < grids; ++i) {
        const OccupancyGrid g = random_grid(rng, max_size);
        const SignedDistanceField fast = compute_obstacle_sdf(g);
        const SignedDistanceField slow = oracle::brute_force_sdf(g, SdfKind::Obstacle);
        bool mismatch = false;
        for (std::size_t j = 0; j < fast.values.size(); ++j) {
            if (fast.values[j] != slow.values[j]) {
                mismatch = true;
                break;
            }
        }
        res.mismatched_grids += mismatch;
    }
    return res;
}

SoftQpSweepResult run_soft_qp_sweep(int count, std::uint64_t seed, double tolerance) {
    Rng rng(seed);
    SoftQpSweepResult res;
    res.count = count;
    FilterParams params;
    oracle::OracleConfig cfg;

    for (int i = 0; i < count; ++i) {
        // Anti-parallel pair with an empty slab: lo > hi guaranteed by gap > 0.
        const double ang = rng.uniform(0.0, 2.0 * kPi);
        const Vec2 axis{std::cos(ang), std::sin(ang)};
        const double n1 = rng.uniform(0.2, 2.0);
        const double n2 = rng.uniform(0.2, 2.0);
        const double hi = rng.uniform(-1.0, 1.0);
        const double gap = rng.uniform(0.05, 1.0);
        const double lo = hi + gap;
        HalfspaceConstraint c1{axis * n1, lo * n1, 0.0, false};
        HalfspaceConstraint c2{-1.0 * axis * n2, -hi * n2, 0.0, false};
        const Vec2 u_des{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
        params.penalty = rng.uniform(1.0, 60.0);

        const SoftSolution sol = solve_soft(u_des, c1, c2, params);
        const oracle::SoftGridResult ref =
            oracle::soft_qp_grid_search(u_des, c1, c2, params.penalty, cfg);
        const double u_err = (sol.u - ref.u).norm();
        const double d_err = std::abs(sol.delta - ref.delta);
        res.max_u_error = std::max(res.max_u_error, u_err);
        res.max_delta_error = std::max(res.max_delta_error, d_err);
        if (u_err > tolerance || d_err > tolerance) ++res.mismatches;
    }

    // Satisfied instances (u_des strictly inside both halfspaces): the
    // relaxation must stay inactive, delta exactly 0, point unchanged.
    params.penalty = 50.0;
    std::vector<SweepInstance> satisfied = make_dual_instances(count, seed + 17);
    for (SweepInstance& inst : satisfied) {
        inst.c1.offset = inst.c1.normal.dot(inst.u_des) - rng.uniform(0.01, 1.0);
        inst.c2.offset = inst.c2.normal.dot(inst.u_des) - rng.uniform(0.01, 1.0);
        const SoftSolution sol = solve_soft(inst.u_des, inst.c1, inst.c2, params);
        if (sol.delta != 0.0 || (sol.u - inst.u_des).norm() != 0.0) ++res.feasible_with_slack;
    }

    // Symmetric anti-parallel case: exact corner optimum.
    {
        HalfspaceConstraint c1{{1.0, 0.0}, 1.0, 0.0, false};
        HalfspaceConstraint c2{{-1.0, 0.0}, 1.0, 0.0, false};
        FilterParams p10;
        p10.penalty = 10.0;
        const SoftSolution sol = solve_soft({0.0, 0.0}, c1, c2, p10);
        res.symmetric_case_exact =
            sol.u.x == 0.0 && sol.u.y == 0.0 && sol.delta == 1.0;
    }
    return res;
}

AdmissibilitySweepResult run_admissibility_sweep() {
    AdmissibilitySweepResult res;
    res.tanh_ok = check_admissibility(ShapingFunction::tanh_shaping()).admissible();
    res.rational_ok = check_admissibility(ShapingFunction::rational()).admissible();
    res.erf_ok = check_admissibility(ShapingFunction::erf_like()).admissible();
    const AdmissibilityReport id = check_admissibility(ShapingFunction::identity());
    res.identity_fails_t4 = !id.bounded && id.odd_sign && id.strictly_increasing &&
                            id.derivative_bounded;
    return res;
}

bool run_all(std::ostream& out, double tolerance, std::uint64_t seed) {
    bool ok = true;
    auto line = [&](const char* name, bool pass, const std::string& detail) {
        out << (pass ? "[PASS] " : "[FAIL] ") << name << ": " << detail << '\n';
        ok = ok && pass;
    };

    const DualSweepResult dual = run_dual_sweep(10000, seed, tolerance);
    line("dual projection vs Dykstra", dual.mismatches == 0,
         "10000 instances, max error " + std::to_string(dual.max_error) + ", " +
             std::to_string(dual.elapsed_seconds) + " s");
    line("KKT certificate", dual.kkt_failures == 0,
         std::to_string(dual.count - dual.kkt_failures) + "/" + std::to_string(dual.count));

    const EdtSweepResult edt = run_edt_sweep(50, 48, seed);
    line("EDT vs brute force (bitwise)", edt.passed(),
         std::to_string(edt.grids - edt.mismatched_grids) + "/" + std::to_string(edt.grids) +
             " grids");

    const SoftQpSweepResult soft = run_soft_qp_sweep(200, seed, 1e-3);
    line("soft-QP vs grid search", soft.mismatches == 0 && soft.feasible_with_slack == 0,
         "200 instances, max |u| err " + std::to_string(soft.max_u_error) + ", max delta err " +
             std::to_string(soft.max_delta_error));
    line("soft-QP symmetric case exact", soft.symmetric_case_exact, "u=(0,0), delta=1");

    const AdmissibilitySweepResult adm = run_admissibility_sweep();
    line("shaping class admissibility", adm.passed(),
         "tanh/rational/erf admissible, identity fails boundedness");

    out << "median apply_filter latency: " << dual.median_filter_latency_us << " us\n";
    return ok;
}

}  // namespace dualcbf::verification
