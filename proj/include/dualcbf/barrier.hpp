#pragma once

#include <functional>
#include <string>

#include "dualcbf/grid.hpp"
#include "dualcbf/vec2.hpp"

namespace dualcbf {

/// A shaping function T: odd-signed, strictly increasing, Lipschitz, bounded.
/// Composed with an SDF to form a barrier h = T(a * (phi - d)).
struct ShapingFunction {
    std::function<double(double)> evaluate;
    std::function<double(double)> derivative;
    double lipschitz_bound = 1.0;
    std::string name;

    static ShapingFunction tanh_shaping();  // T(s) = tanh(s), L = 1
    static ShapingFunction rational();      // T(s) = s / (1 + |s|), L = 1
    static ShapingFunction erf_like();      // rational erf approximation, |err| < 1.5e-7
    static ShapingFunction identity();      // T(s) = s; unbounded, fails the class check
    static ShapingFunction by_name(const std::string& name);  // tanh | rational | erf

    /// s -> T(a*s) with Lipschitz bound a*L. The scaled function stays in the
    /// admissible class for any a > 0.
    ShapingFunction scaled(double a) const;
};

struct BarrierSpec {
    double sharpness = 2.0;  // a_i, 1/m
    double standoff = 0.35;  // d_i, m
    double gain = 1.5;       // gamma_i, 1/s
    ShapingFunction shaping = ShapingFunction::tanh_shaping();
};

/// One CBF halfspace g^T u >= b. `degenerate` marks a saturated constraint
/// whose normal is numerically unusable; the filter decides the response.
struct HalfspaceConstraint {
    Vec2 normal;                 // g
    double offset = 0.0;         // b
    double barrier_value = 0.0;  // h
    bool degenerate = false;
};

struct GammaSchedule {
    double gamma_min = 0.2;  // 1/s
    double gamma_max = 1.0;  // 1/s
};

/// h = T(a * (sdf_value - d)). Zero exactly at the standoff surface.
double barrier_value(const BarrierSpec& spec, double sdf_value);

/// g = a * T'(a*(phi-d)) * grad(phi), b = -gamma * h. Degenerate when the
/// sample is degenerate or ||g|| falls below degenerate_tol.
HalfspaceConstraint build_constraint(const BarrierSpec& spec, const SdfSample& sample,
                                     double degenerate_tol = 1e-9);

/// gamma2 = gamma_min + (gamma_max - gamma_min) * (1 - rho). Throws when rho
/// is outside [0, 1].
double adaptive_gamma(const GammaSchedule& schedule, double rho);

/// Numerical certification of the shaping-class properties on a symmetric
/// sample grid. T2 tolerates flat double-precision saturation tails but
/// requires a strictly positive derivative everywhere; T4 probes boundedness
/// by checking that per-decade growth of |T| dies out beyond the range.
struct AdmissibilityReport {
    bool odd_sign = false;             // T1: T(0)=0, sign(T(s))=sign(s)
    bool strictly_increasing = false;  // T2
    bool derivative_bounded = false;   // T3: |T'| <= lipschitz_bound
    bool bounded = false;              // T4
    bool derivative_matches_fd = false;
    double max_abs_derivative = 0.0;
    double max_fd_error = 0.0;
    bool admissible() const {
        return odd_sign && strictly_increasing && derivative_bounded && bounded &&
               derivative_matches_fd;
    }
};

AdmissibilityReport check_admissibility(const ShapingFunction& fn, double range = 20.0,
                                        int n_samples = 4001);

}  // namespace dualcbf
