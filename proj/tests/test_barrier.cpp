#include <doctest.h>

#include <cmath>

#include "dualcbf/barrier.hpp"
#include "dualcbf/rng.hpp"

using namespace dualcbf;

TEST_CASE("barrier value is zero at the standoff surface") {
    BarrierSpec spec;
    CHECK(barrier_value(spec, spec.standoff) == 0.0);
}

TEST_CASE("barrier value reproduces tanh(a * (phi - d))") {
    BarrierSpec spec;  // a = 2
    // independent high-precision evaluation: tanh(1.0)
    CHECK(barrier_value(spec, spec.standoff + 0.5) == doctest::Approx(0.7615941559557649).epsilon(1e-12));
}

TEST_CASE("barrier saturates deep in the interior") {
    BarrierSpec spec;
    const double h = barrier_value(spec, spec.standoff + 10.0);
    CHECK(h > 0.9999);
    CHECK(h < 1.0 + 1e-15);
}

TEST_CASE("constraint at the boundary: unit slope, zero offset") {
    BarrierSpec spec;
    spec.gain = 1.5;
    const SdfSample s{spec.standoff, {1.0, 0.0}, false};
    const HalfspaceConstraint c = build_constraint(spec, s);
    CHECK(c.barrier_value == 0.0);
    CHECK(c.normal.x == doctest::Approx(2.0).epsilon(1e-15));  // a * tanh'(0)
    CHECK(c.normal.y == 0.0);
    CHECK(c.offset == 0.0);
    CHECK(!c.degenerate);
}

TEST_CASE("constraint half a meter inside: frozen tanh/sech^2 values") {
    BarrierSpec spec;
    spec.gain = 1.5;
    const SdfSample s{spec.standoff + 0.5, {0.0, 1.0}, false};
    const HalfspaceConstraint c = build_constraint(spec, s);
    CHECK(c.barrier_value == doctest::Approx(0.7615941559557649).epsilon(1e-12));
    CHECK(c.normal.x == 0.0);
    // 2 * (1 - tanh(1)^2), evaluated independently
    CHECK(c.normal.y == doctest::Approx(0.8399486832280523).epsilon(1e-9));
    CHECK(c.offset == doctest::Approx(-1.1423912339336473).epsilon(1e-9));
}

TEST_CASE("saturated constraint is reported degenerate, not thrown") {
    BarrierSpec spec;
    const SdfSample s{spec.standoff + 10.0, {1.0, 0.0}, false};
    const HalfspaceConstraint c = build_constraint(spec, s);
    CHECK(c.normal.norm() < 1e-8);
    CHECK(c.degenerate);
}

TEST_CASE("degenerate samples propagate into the constraint") {
    BarrierSpec spec;
    const SdfSample s{spec.standoff + 0.1, {0.0, 0.0}, true};
    CHECK(build_constraint(spec, s).degenerate);
}

TEST_CASE("adaptive gamma reproduces the affine schedule") {
    const GammaSchedule sched{0.2, 1.0};
    CHECK(adaptive_gamma(sched, 1.0) == doctest::Approx(0.2));
    CHECK(adaptive_gamma(sched, 0.0) == doctest::Approx(1.0));
    CHECK(adaptive_gamma(sched, 0.5) == doctest::Approx(0.6));
    CHECK_THROWS(adaptive_gamma(sched, -0.1));
    CHECK_THROWS(adaptive_gamma(sched, 1.5));
}

TEST_CASE("adaptive gamma is bounded and monotone in rho") {
    const GammaSchedule sched{0.2, 1.0};
    Rng rng(3);
    for (int i = 0; i < 500; ++i) {
        const double r1 = rng.uniform();
        const double r2 = rng.uniform(r1, 1.0);
        const double g1 = adaptive_gamma(sched, r1);
        const double g2 = adaptive_gamma(sched, r2);
        CHECK(g1 >= g2);
        CHECK(g2 >= sched.gamma_min);
        CHECK(g1 <= sched.gamma_max);
    }
}

TEST_CASE("sign equivalence: h >= 0 iff phi >= d") {
    Rng rng(9);
    for (const char* name : {"tanh", "rational", "erf"}) {
        BarrierSpec spec;
        spec.shaping = ShapingFunction::by_name(name);
        for (int i = 0; i < 500; ++i) {
            spec.sharpness = rng.uniform(0.2, 5.0);
            spec.standoff = rng.uniform(0.0, 1.0);
            const double phi = rng.uniform(-2.0, 3.0);
            const double h = barrier_value(spec, phi);
            CHECK((h >= 0.0) == (phi >= spec.standoff));
        }
    }
}

TEST_CASE("constraint norm bound: ||g|| <= a*L, exactly a(1-h^2) for tanh") {
    Rng rng(21);
    BarrierSpec spec;
    for (int i = 0; i < 500; ++i) {
        spec.sharpness = rng.uniform(0.5, 4.0);
        const SdfSample s{rng.uniform(-1.0, 2.0), {1.0, 0.0}, false};
        const HalfspaceConstraint c = build_constraint(spec, s);
        CHECK(c.normal.norm() <= spec.sharpness * spec.shaping.lipschitz_bound + 1e-12);
        const double h = c.barrier_value;
        CHECK(std::abs(c.normal.norm() - spec.sharpness * (1.0 - h * h)) <= 1e-12);
    }
}

TEST_CASE("barrier value is strictly increasing in the SDF value") {
    Rng rng(13);
    BarrierSpec spec;
    for (int i = 0; i < 500; ++i) {
        // stay in the numerically resolvable band
        const double lo = rng.uniform(-2.0, 2.0);
        const double hi = lo + rng.uniform(1e-6, 1.0);
        CHECK(barrier_value(spec, lo) < barrier_value(spec, hi));
    }
}

TEST_CASE("shipped shaping functions are admissible; identity is not bounded") {
    CHECK(check_admissibility(ShapingFunction::tanh_shaping()).admissible());
    CHECK(check_admissibility(ShapingFunction::rational()).admissible());
    CHECK(check_admissibility(ShapingFunction::erf_like()).admissible());

    const AdmissibilityReport id = check_admissibility(ShapingFunction::identity());
    CHECK(id.odd_sign);
    CHECK(id.strictly_increasing);
    CHECK(id.derivative_bounded);
    CHECK(!id.bounded);
    CHECK(!id.admissible());
}

TEST_CASE("scaled shaping functions stay in the class with bound a*L") {
    const ShapingFunction scaled = ShapingFunction::tanh_shaping().scaled(3.0);
    CHECK(scaled.lipschitz_bound == doctest::Approx(3.0));
    CHECK(check_admissibility(scaled).admissible());
    CHECK(check_admissibility(ShapingFunction::rational().scaled(0.5)).admissible());
}

TEST_CASE("admissibility checker validates its own preconditions") {
    CHECK_THROWS(check_admissibility(ShapingFunction::tanh_shaping(), 20.0, 2));
    CHECK_THROWS(check_admissibility(ShapingFunction::tanh_shaping(), -1.0));
}

TEST_CASE("erf approximation stays within 1.5e-7 of std::erf") {
    const ShapingFunction f = ShapingFunction::erf_like();
    for (double s = -4.0; s <= 4.0; s += 0.01)
        CHECK(std::abs(f.evaluate(s) - std::erf(s)) < 1.6e-7);
}
