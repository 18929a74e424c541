#pragma once

#include <cstdint>
#include <random>

#include "dualcbf/vec2.hpp"

namespace dualcbf {

// Deterministic RNG with explicit bit-to-double mapping. std::distributions are
// implementation-defined, which would break byte-identical traces across
// toolchains, so the mappings are spelled out here.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [lo, hi] inclusive.
    int uniform_int(int lo, int hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<int>(engine_() % span);
    }

    // Uniform over the disc of given radius (polar, area-correct).
    Vec2 in_disc(double radius) {
        const double a = uniform(0.0, 6.283185307179586);
        const double r = radius * std::sqrt(uniform());
        return {r * std::cos(a), r * std::sin(a)};
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace dualcbf
