#include "dualcbf/barrier.hpp"

#include <cmath>
#include <stdexcept>

namespace dualcbf {

namespace {

// Abramowitz & Stegun 7.1.26 rational approximation of erf on x >= 0,
// |error| < 1.5e-7. Extended as an odd function with the tiny x=0 offset
// subtracted so T(0) == 0 holds exactly.
double erf_core(double x) {
    constexpr double p = 0.3275911;
    constexpr double a1 = 0.254829592, a2 = -0.284496736, a3 = 1.421413741;
    constexpr double a4 = -1.453152027, a5 = 1.061405429;
    const double t = 1.0 / (1.0 + p * x);
    const double poly = ((((a5 * t + a4) * t + a3) * t + a2) * t + a1) * t;
    return 1.0 - poly * std::exp(-x * x);
}

double erf_core_derivative(double x) {
    constexpr double p = 0.3275911;
    constexpr double a1 = 0.254829592, a2 = -0.284496736, a3 = 1.421413741;
    constexpr double a4 = -1.453152027, a5 = 1.061405429;
    const double t = 1.0 / (1.0 + p * x);
    const double poly = ((((a5 * t + a4) * t + a3) * t + a2) * t + a1) * t;
    const double dpoly = (((5.0 * a5 * t + 4.0 * a4) * t + 3.0 * a3) * t + 2.0 * a2) * t + a1;
    const double dt = -p * t * t;
    // d/dx [1 - poly(t(x)) e^{-x^2}]
    return std::exp(-x * x) * (2.0 * x * poly - dpoly * dt);
}

}  // namespace

ShapingFunction ShapingFunction::tanh_shaping() {
    ShapingFunction f;
    f.evaluate = [](double s) { return std::tanh(s); };
    // sech^2 keeps a strictly positive tail where 1 - tanh^2 underflows to 0.
    f.derivative = [](double s) {
        const double c = 1.0 / std::cosh(s);
        return c * c;
    };
    f.lipschitz_bound = 1.0;
    f.name = "tanh";
    return f;
}

ShapingFunction ShapingFunction::rational() {
    ShapingFunction f;
    f.evaluate = [](double s) { return s / (1.0 + std::abs(s)); };
    f.derivative = [](double s) {
        const double d = 1.0 + std::abs(s);
        return 1.0 / (d * d);
    };
    f.lipschitz_bound = 1.0;
    f.name = "rational";
    return f;
}

ShapingFunction ShapingFunction::erf_like() {
    ShapingFunction f;
    const double offset = erf_core(0.0);
    f.evaluate = [offset](double s) {
        const double v = erf_core(std::abs(s)) - offset;
        return s < 0.0 ? -v : v;
    };
    f.derivative = [](double s) { return erf_core_derivative(std::abs(s)); };
    // max derivative of the approximation is ~2/sqrt(pi) at the origin
    f.lipschitz_bound = 1.129;
    f.name = "erf";
    return f;
}

ShapingFunction ShapingFunction::identity() {
    ShapingFunction f;
    f.evaluate = [](double s) { return s; };
    f.derivative = [](double) { return 1.0; };
    f.lipschitz_bound = 1.0;
    f.name = "identity";
    return f;
}

ShapingFunction ShapingFunction::by_name(const std::string& name) {
    if (name == "tanh") return tanh_shaping();
    if (name == "rational") return rational();
    if (name == "erf") return erf_like();
    throw std::invalid_argument("unknown shaping function '" + name + "' (tanh|rational|erf)");
}

ShapingFunction ShapingFunction::scaled(double a) const {
    if (!(a > 0.0)) throw std::invalid_argument("shaping scale must be > 0");
    ShapingFunction f;
    f.evaluate = [eval = evaluate, a](double s) { return eval(a * s); };
    f.derivative = [deriv = derivative, a](double s) { return a * deriv(a * s); };
    f.lipschitz_bound = a * lipschitz_bound;
    f.name = name + "_scaled";
    return f;
}

double barrier_value(const BarrierSpec& spec, double sdf_value) {
    return spec.shaping.evaluate(spec.sharpness * (sdf_value - spec.standoff));
}

HalfspaceConstraint build_constraint(const BarrierSpec& spec, const SdfSample& sample,
                                     double degenerate_tol) {
    const double s = spec.sharpness * (sample.value - spec.standoff);
    const double h = spec.shaping.evaluate(s);
    const double slope = spec.sharpness * spec.shaping.derivative(s);  // chain rule over T(a s)
    HalfspaceConstraint c;
    c.normal = slope * sample.gradient;
    c.offset = -spec.gain * h;
    c.barrier_value = h;
    c.degenerate = sample.degenerate || c.normal.norm() < degenerate_tol;
    return c;
}

double adaptive_gamma(const GammaSchedule& schedule, double rho) {
    if (!(rho >= 0.0 && rho <= 1.0))
        throw std::invalid_argument("adaptive_gamma: rho must lie in [0, 1]");
    return schedule.gamma_min + (schedule.gamma_max - schedule.gamma_min) * (1.0 - rho);
}

AdmissibilityReport check_admissibility(const ShapingFunction& fn, double range, int n_samples) {
    if (n_samples < 3) throw std::invalid_argument("check_admissibility: n_samples must be >= 3");
    if (!(range > 0.0)) throw std::invalid_argument("check_admissibility: range must be > 0");

    AdmissibilityReport rep;
    const double step = 2.0 * range / (n_samples - 1);

    // T1: zero at the origin, sign preserved at every sample
    bool odd = std::abs(fn.evaluate(0.0)) <= 1e-12;
    // T2: nowhere decreasing, derivative strictly positive (tolerates flat
    // double-saturated tails where increments are below representable size)
    bool increasing = true;
    // T3 + finite-difference cross-check
    bool deriv_bounded = true;
    bool fd_ok = true;
    double prev = fn.evaluate(-range);
    for (int i = 0; i < n_samples; ++i) {
        const double s = -range + i * step;
        const double value = fn.evaluate(s);
        if (s > 0.0 && value <= 0.0) odd = false;
        if (s < 0.0 && value >= 0.0) odd = false;
        if (i > 0 && value < prev) increasing = false;
        prev = value;

        const double d = fn.derivative(s);
        if (d <= 0.0) increasing = false;
        rep.max_abs_derivative = std::max(rep.max_abs_derivative, std::abs(d));
        if (std::abs(d) > fn.lipschitz_bound + 1e-9) deriv_bounded = false;

        constexpr double eps = 1e-7;
        const double fd = (fn.evaluate(s + eps) - fn.evaluate(s - eps)) / (2.0 * eps);
        const double err = std::abs(fd - d);
        rep.max_fd_error = std::max(rep.max_fd_error, err);
        if (err > 1e-6 * std::max(1.0, std::abs(d))) fd_ok = false;
    }

    // T4 saturation probe: |T| sampled at decade-spaced arguments beyond the
    // range; per-decade growth must vanish for a bounded function.
    double prev_mag = std::max(std::abs(fn.evaluate(range)), std::abs(fn.evaluate(-range)));
    double last_increment = 0.0;
    for (int k = 1; k <= 6; ++k) {
        const double s = range * std::pow(10.0, k);
        const double mag = std::max(std::abs(fn.evaluate(s)), std::abs(fn.evaluate(-s)));
        last_increment = mag - prev_mag;
        prev_mag = mag;
    }
    rep.bounded = std::isfinite(prev_mag) && last_increment <= 1e-3;

    rep.odd_sign = odd;
    rep.strictly_increasing = increasing;
    rep.derivative_bounded = deriv_bounded;
    rep.derivative_matches_fd = fd_ok;
    return rep;
}

}  // namespace dualcbf
