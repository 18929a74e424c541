#include "dualcbf/filter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dualcbf {

const char* to_string(FilterCase c) {
    switch (c) {
        case FilterCase::Nominal: return "Nominal";
        case FilterCase::SingleObstacle: return "SingleObstacle";
        case FilterCase::SingleFrontier: return "SingleFrontier";
        case FilterCase::Dual: return "Dual";
        case FilterCase::SoftFallback: return "SoftFallback";
        case FilterCase::FailSafeStop: return "FailSafeStop";
        case FilterCase::ObstacleOnly: return "ObstacleOnly";
    }
    return "?";
}

Vec2 project_single(const Vec2& u_des, const HalfspaceConstraint& c) {
    const double slack = c.normal.dot(u_des) - c.offset;
    if (slack >= 0.0) return u_des;
    return u_des + (-slack / c.normal.squared_norm()) * c.normal;
}

DualProjection project_dual(const Vec2& u_des, const HalfspaceConstraint& c1,
                            const HalfspaceConstraint& c2, const FilterParams& params) {
    const Vec2 g1 = c1.normal, g2 = c2.normal;
    const double a11 = g1.squared_norm();
    const double a22 = g2.squared_norm();
    const double a12 = g1.dot(g2);

    DualProjection out;
    out.gram_det = a11 * a22 - a12 * a12;

    const double s1 = g1.dot(u_des) - c1.offset;
    const double s2 = g2.dot(u_des) - c2.offset;

    // Case 1: interior point
    if (s1 >= 0.0 && s2 >= 0.0) {
        out.u = u_des;
        out.active_case = FilterCase::Nominal;
        return out;
    }
    if (out.gram_det < params.parallel_tolerance * a11 * a22) {
        out.u = u_des;
        out.parallel = true;
        return out;
    }

    // Cases 2/3: single projection, verify the other constraint
    if (s1 < 0.0 && s2 >= 0.0) {
        const double lam = -s1 / a11;
        const Vec2 u = u_des + lam * g1;
        if (g2.dot(u) - c2.offset >= 0.0) {
            out.u = u;
            out.active_case = FilterCase::SingleObstacle;
            out.lambda1 = lam;
            return out;
        }
    } else if (s2 < 0.0 && s1 >= 0.0) {
        const double lam = -s2 / a22;
        const Vec2 u = u_des + lam * g2;
        if (g1.dot(u) - c1.offset >= 0.0) {
            out.u = u;
            out.active_case = FilterCase::SingleFrontier;
            out.lambda2 = lam;
            return out;
        }
    }

    // Case 4: both active, 2x2 Gram system. A negative multiplier means that
    // constraint is not truly active; drop it and project onto the other.
    const double r1 = -s1, r2 = -s2;
    const double lam1 = (a22 * r1 - a12 * r2) / out.gram_det;
    const double lam2 = (a11 * r2 - a12 * r1) / out.gram_det;
    if (lam1 >= 0.0 && lam2 >= 0.0) {
        out.u = u_des + lam1 * g1 + lam2 * g2;
        out.active_case = FilterCase::Dual;
        out.lambda1 = lam1;
        out.lambda2 = lam2;
    } else if (lam1 < 0.0 && lam2 < 0.0) {
        out.u = u_des;  // both multipliers negative means u_des was feasible
        out.active_case = FilterCase::Nominal;
    } else if (lam2 < 0.0) {
        out.lambda1 = std::max(0.0, -s1) / a11;
        out.u = u_des + out.lambda1 * g1;
        out.active_case = FilterCase::SingleObstacle;
    } else {
        out.lambda2 = std::max(0.0, -s2) / a22;
        out.u = u_des + out.lambda2 * g2;
        out.active_case = FilterCase::SingleFrontier;
    }
    return out;
}

ParallelProjection project_parallel(const Vec2& u_des, const HalfspaceConstraint& c1,
                                    const HalfspaceConstraint& c2) {
    const double n1 = c1.normal.norm();
    const double n2 = c2.normal.norm();
    const Vec2 axis = c1.normal / n1;
    const double t0 = axis.dot(u_des);

    ParallelProjection out;
    if (c1.normal.dot(c2.normal) > 0.0) {
        // Same direction: the tighter bound subsumes the other.
        const double lo1 = c1.offset / n1;
        const double lo2 = c2.offset / n2;
        const double lo = std::max(lo1, lo2);
        if (t0 >= lo) {
            out.u = u_des;
            out.active_case = FilterCase::Nominal;
            return out;
        }
        out.u = u_des + (lo - t0) * axis;
        if (lo1 >= lo2) {
            out.active_case = FilterCase::SingleObstacle;
            out.lambda1 = (lo - t0) / n1;
        } else {
            out.active_case = FilterCase::SingleFrontier;
            out.lambda2 = (lo - t0) / n2;
        }
        return out;
    }

    // Anti-parallel: a slab lo <= t <= hi along the shared axis.
    const double lo = c1.offset / n1;
    const double hi = -c2.offset / n2;
    if (lo > hi) {
        out.feasible = false;
        out.u = u_des;
        return out;
    }
    if (t0 < lo) {
        out.u = u_des + (lo - t0) * axis;
        out.active_case = FilterCase::SingleObstacle;
        out.lambda1 = (lo - t0) / n1;
    } else if (t0 > hi) {
        out.u = u_des + (hi - t0) * axis;
        out.active_case = FilterCase::SingleFrontier;
        out.lambda2 = (t0 - hi) / n2;
    } else {
        out.u = u_des;
        out.active_case = FilterCase::Nominal;
    }
    return out;
}

namespace {

struct HardProjection {
    Vec2 u;
    double multiplier_sum = 0.0;
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    bool feasible = true;
};

HardProjection project_hard(const Vec2& u_des, HalfspaceConstraint c1, HalfspaceConstraint c2,
                            double delta, const FilterParams& params) {
    c1.offset -= delta;
    c2.offset -= delta;
    HardProjection hp;
    const double a11 = c1.normal.squared_norm();
    const double a22 = c2.normal.squared_norm();
    const double a12 = c1.normal.dot(c2.normal);
    const bool parallel = (a11 * a22 - a12 * a12) < params.parallel_tolerance * a11 * a22;
    if (!parallel) {
        const DualProjection dp = project_dual(u_des, c1, c2, params);
        hp.u = dp.u;
        hp.lambda1 = dp.lambda1;
        hp.lambda2 = dp.lambda2;
    } else {
        const ParallelProjection pp = project_parallel(u_des, c1, c2);
        hp.u = pp.u;
        hp.lambda1 = pp.lambda1;
        hp.lambda2 = pp.lambda2;
        hp.feasible = pp.feasible;
    }
    hp.multiplier_sum = hp.lambda1 + hp.lambda2;
    return hp;
}

}  // namespace

SoftSolution solve_soft(const Vec2& u_des, const HalfspaceConstraint& c1,
                        const HalfspaceConstraint& c2, const FilterParams& params) {
    const double n1 = c1.normal.norm();
    const double n2 = c2.normal.norm();

    // Smallest delta at which the relaxed pair is feasible. Nonzero only for
    // anti-parallel normals whose slab is empty.
    double delta_feasible = 0.0;
    const double a12 = c1.normal.dot(c2.normal);
    const double gram = n1 * n1 * n2 * n2 - a12 * a12;
    if (gram < params.parallel_tolerance * n1 * n1 * n2 * n2 && a12 < 0.0)
        delta_feasible = std::max(0.0, (c1.offset * n2 + c2.offset * n1) / (n1 + n2));

    const double p = params.penalty;
    auto residual = [&](double delta) {
        // f(delta) = p*delta - sum of multipliers of the relaxed hard projection
        const HardProjection hp = project_hard(u_des, c1, c2, delta, params);
        if (!hp.feasible) return -std::numeric_limits<double>::infinity();
        return p * delta - hp.multiplier_sum;
    };

    double delta = delta_feasible;
    if (residual(delta_feasible) < 0.0) {
        double lo = delta_feasible;
        double hi = std::max({delta_feasible, c1.offset - c1.normal.dot(u_des),
                              c2.offset - c2.normal.dot(u_des), 0.0}) +
                    1e-6;  // u_des itself is feasible here, so f(hi) > 0
        for (int i = 0; i < params.bisection_iters; ++i) {
            const double mid = 0.5 * (lo + hi);
            if (residual(mid) < 0.0)
                lo = mid;
            else
                hi = mid;
        }
        delta = hi;  // keep the feasible side of the bracket
    }

    const HardProjection hp = project_hard(u_des, c1, c2, delta, params);
    SoftSolution sol;
    sol.u = hp.u;
    sol.delta = delta;
    sol.lambda1 = hp.lambda1;
    sol.lambda2 = hp.lambda2;
    return sol;
}

Vec2 speed_ceiling(const Vec2& u, double v_max) {
    const double n = u.norm();
    if (n <= v_max) return u;
    return u * (v_max / n);
}

FilterResult apply_filter(const Vec2& u_des, const SdfSample& obstacle,
                          const std::optional<SdfSample>& frontier, std::optional<double> rho,
                          const BarrierSpec& obstacle_spec, const BarrierSpec& frontier_spec,
                          const GammaSchedule& schedule, const FilterParams& params) {
    if (frontier.has_value() != rho.has_value())
        throw std::invalid_argument("apply_filter: frontier sample and rho must be jointly present");

    const HalfspaceConstraint c1 =
        build_constraint(obstacle_spec, obstacle, params.degenerate_norm);

    FilterResult res;
    res.h1 = c1.barrier_value;

    auto violated = [&](const HalfspaceConstraint& c) { return c.normal.dot(u_des) < c.offset; };
    Vec2 u = u_des;

    if (!frontier) {
        if (c1.degenerate) {
            if (violated(c1)) {
                res.active_case = FilterCase::FailSafeStop;
                u = {0.0, 0.0};
            } else {
                res.active_case = FilterCase::ObstacleOnly;  // vacuous constraint
            }
        } else {
            u = project_single(u_des, c1);
            res.active_case = FilterCase::ObstacleOnly;
            res.lambda1 = std::max(0.0, c1.offset - c1.normal.dot(u_des)) / c1.normal.squared_norm();
        }
    } else {
        const double gamma2 = adaptive_gamma(schedule, *rho);
        res.gamma2 = gamma2;
        BarrierSpec fs = frontier_spec;
        fs.gain = gamma2;
        const HalfspaceConstraint c2 = build_constraint(fs, *frontier, params.degenerate_norm);
        res.h2 = c2.barrier_value;

        if ((c1.degenerate && violated(c1)) || (c2.degenerate && violated(c2))) {
            // Saturated AND violated: no velocity direction can help; stop.
            res.active_case = FilterCase::FailSafeStop;
            u = {0.0, 0.0};
        } else if (c1.degenerate && c2.degenerate) {
            res.active_case = FilterCase::Nominal;  // both vacuous
        } else if (c2.degenerate) {
            u = project_single(u_des, c1);
            res.lambda1 = std::max(0.0, c1.offset - c1.normal.dot(u_des)) / c1.normal.squared_norm();
            res.active_case =
                res.lambda1 > 0.0 ? FilterCase::SingleObstacle : FilterCase::Nominal;
        } else if (c1.degenerate) {
            u = project_single(u_des, c2);
            res.lambda2 = std::max(0.0, c2.offset - c2.normal.dot(u_des)) / c2.normal.squared_norm();
            res.active_case =
                res.lambda2 > 0.0 ? FilterCase::SingleFrontier : FilterCase::Nominal;
        } else {
            const DualProjection dp = project_dual(u_des, c1, c2, params);
            res.gram_det = dp.gram_det;
            if (!dp.parallel) {
                u = dp.u;
                res.active_case = dp.active_case;
                res.lambda1 = dp.lambda1;
                res.lambda2 = dp.lambda2;
            } else {
                const ParallelProjection pp = project_parallel(u_des, c1, c2);
                if (pp.feasible) {
                    u = pp.u;
                    res.active_case = pp.active_case;
                    res.lambda1 = pp.lambda1;
                    res.lambda2 = pp.lambda2;
                } else {
                    const SoftSolution ss = solve_soft(u_des, c1, c2, params);
                    u = ss.u;
                    res.active_case = FilterCase::SoftFallback;
                    res.slack = ss.delta;
                    res.lambda1 = ss.lambda1;
                    res.lambda2 = ss.lambda2;
                }
            }
        }
    }

    res.intervention_magnitude = (u - u_des).norm();
    res.u_safe = speed_ceiling(u, params.v_max);
    res.speed_clipped = (res.u_safe - u).squared_norm() > 0.0;
    return res;
}

KktReport verify_kkt(const Vec2& u_des, const HalfspaceConstraint& c1,
                     const HalfspaceConstraint& c2, const DualProjection& result) {
    KktReport rep;
    const double s1 = c1.normal.dot(result.u) - c1.offset;
    const double s2 = c2.normal.dot(result.u) - c2.offset;
    rep.worst_primal = std::min(s1, s2);
    rep.primal_feasible = rep.worst_primal >= -1e-9;
    rep.dual_feasible = result.lambda1 >= -1e-12 && result.lambda2 >= -1e-12;
    rep.worst_complementarity =
        std::max(std::abs(result.lambda1 * s1), std::abs(result.lambda2 * s2));
    rep.complementary = rep.worst_complementarity <= 1e-9;
    const Vec2 stat = result.u - u_des - result.lambda1 * c1.normal - result.lambda2 * c2.normal;
    rep.stationarity_residual = stat.norm();
    rep.stationary = rep.stationarity_residual <= 1e-9;
    return rep;
}

}  // namespace dualcbf
