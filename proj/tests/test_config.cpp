#include <doctest.h>

#include <sstream>

#include "dualcbf/barrier.hpp"
#include "dualcbf/config.hpp"

using namespace dualcbf;

namespace {

RunConfig parse(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}

}  // namespace

TEST_CASE("empty configuration yields the full default block") {
    const RunConfig cfg = parse("");
    CHECK(cfg.d_safe == 0.35);
    CHECK(cfg.d_stop == 0.35);
    CHECK(cfg.a1 == 2.0);
    CHECK(cfg.a2 == 2.0);
    CHECK(cfg.gamma1 == 1.5);
    CHECK(cfg.gamma2_min == 0.2);
    CHECK(cfg.gamma2_max == 1.0);
    CHECK(cfg.v_max == 0.20);
    CHECK(cfg.n_min == 25);
    CHECK(cfg.shaping == "tanh");
    CHECK(cfg.ticks == 1200);
    CHECK(cfg.dt == 0.1);
    CHECK(cfg.robot_radius == 0.22);
    CHECK(cfg.effective_rho_radius() == cfg.sensor_range);
}

TEST_CASE("strict positivity gates reject a zero frontier gain") {
    CHECK_THROWS_WITH_AS(parse("gamma2_min = 0\n"), doctest::Contains("gamma2_min"),
                         std::invalid_argument);
}

TEST_CASE("shaping key selects the rational instantiation") {
    const RunConfig cfg = parse("shaping = rational\n");
    CHECK(cfg.shaping == "rational");
    const ShapingFunction f = ShapingFunction::by_name(cfg.shaping);
    CHECK(f.evaluate(1.0) == doctest::Approx(0.5));  // s/(1+|s|)
}

TEST_CASE("unknown keys are rejected by name") {
    CHECK_THROWS_WITH_AS(parse("warp_factor = 9\n"), doctest::Contains("warp_factor"),
                         std::invalid_argument);
}

TEST_CASE("type mismatches name the key") {
    CHECK_THROWS_WITH_AS(parse("v_max = fast\n"), doctest::Contains("v_max"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse("ticks = 10.5\n"), doctest::Contains("ticks"),
                         std::invalid_argument);
}

TEST_CASE("comments and blank lines are ignored") {
    const RunConfig cfg = parse("# comment\n\n  a1 = 3.0  # trailing\n");
    CHECK(cfg.a1 == 3.0);
}

TEST_CASE("echoed configuration round-trips to an identical RunConfig") {
    RunConfig cfg;
    cfg.scenario = "corridor";
    cfg.seed = 17;
    cfg.a1 = 2.5;
    cfg.gamma2_min = 0.25;
    cfg.penalty_p = 12.5;
    cfg.rho_radius = 1.75;
    cfg.filter_enabled = false;
    cfg.shaping = "erf";
    const RunConfig reloaded = parse(cfg.echo());
    CHECK(reloaded == cfg);
}

TEST_CASE("defaults echo round-trips too") {
    const RunConfig cfg;
    CHECK(parse(cfg.echo()) == cfg);
}

TEST_CASE("invariant violations name the offending key") {
    CHECK_THROWS_WITH_AS(parse("ray_count = 4\n"), doctest::Contains("ray_count"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse("gamma2_max = 0.1\n"), doctest::Contains("gamma2_max"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse("shaping = spline\n"), doctest::Contains("shaping"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse("fov_deg = 400\n"), doctest::Contains("fov_deg"),
                         std::invalid_argument);
}
