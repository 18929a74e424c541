#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dualcbf/filter.hpp"

namespace dualcbf::verification {

// Reusable oracle sweeps backing both the CLI `verify` subcommand and the
// acceptance suite.

struct SweepInstance {
    Vec2 u_des;
    HalfspaceConstraint c1;
    HalfspaceConstraint c2;
};

/// Random non-parallel pair: ||g|| in [0.1, 2], angle between normals in
/// [10 deg, 170 deg], b in [-1, 1], u_des in [-1, 1]^2.
std::vector<SweepInstance> make_dual_instances(int count, std::uint64_t seed);

struct DualSweepResult {
    int count = 0;
    int mismatches = 0;        // |closed form - Dykstra| > tolerance in a component
    int kkt_failures = 0;
    double max_error = 0.0;
    double elapsed_seconds = 0.0;
    double median_filter_latency_us = 0.0;  // apply_filter timing on synthetic samples
    bool passed() const { return mismatches == 0 && kkt_failures == 0; }
};

DualSweepResult run_dual_sweep(int count, std::uint64_t seed, double tolerance);

struct EdtSweepResult {
    int grids = 0;
    int mismatched_grids = 0;  // any cell differing bitwise from the brute force
    bool passed() const { return mismatched_grids == 0; }
};

/// Seeded random grids up to max_size x max_size, EDT vs brute force, bitwise.
EdtSweepResult run_edt_sweep(int grids, int max_size, std::uint64_t seed);

struct SoftQpSweepResult {
    int count = 0;
    int mismatches = 0;          // vs grid search beyond tolerance (u or delta)
    int feasible_with_slack = 0; // delta != 0 on an already-satisfied instance
    bool symmetric_case_exact = false;
    double max_u_error = 0.0;
    double max_delta_error = 0.0;
    bool passed() const {
        return mismatches == 0 && feasible_with_slack == 0 && symmetric_case_exact;
    }
};

/// Constructed anti-parallel infeasible instances vs the grid-search oracle,
/// plus satisfied instances (delta must stay 0) and the symmetric anti-parallel
/// case which must come out exactly u=(0,0), delta=1.
SoftQpSweepResult run_soft_qp_sweep(int count, std::uint64_t seed, double tolerance);

struct AdmissibilitySweepResult {
    bool tanh_ok = false;
    bool rational_ok = false;
    bool erf_ok = false;
    bool identity_fails_t4 = false;
    bool passed() const { return tanh_ok && rational_ok && erf_ok && identity_fails_t4; }
};

AdmissibilitySweepResult run_admissibility_sweep();

/// One human-readable PASS/FAIL line per sweep; returns overall pass.
bool run_all(std::ostream& out, double tolerance, std::uint64_t seed);

}  // namespace dualcbf::verification
