#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace robopinion {

/// Seeded random source with a fully pinned draw contract: the engine is
/// std::mt19937_64 (bit-exact by the standard) and both uniform01() and
/// gauss() are built from raw engine output here, so sequences do not depend
/// on any library's distribution internals.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1) with 53 bits of mantissa.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Standard normal via Box-Muller; consumes two uniforms per pair.
    double gauss() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform01();
        double u2 = uniform01();
        // Guard the log; u1 == 0 has probability 2^-53 per draw.
        while (u1 <= 0.0) {
            u1 = uniform01();
        }
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * M_PI * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

    std::uint64_t raw() { return engine_(); }

    /// Integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        return static_cast<std::uint64_t>(uniform01() * static_cast<double>(n));
    }

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace robopinion
