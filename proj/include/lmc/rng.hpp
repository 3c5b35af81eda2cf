#pragma once

// Deterministic, splittable random numbers. Sample i of a seeded suite is a
// pure function of (seed, i), so parallel scans stay reproducible.

#include <cmath>
#include <cstdint>

namespace lmc {

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * next_unit(); }

    // log-uniform magnitude in [lo, hi], random sign
    double signed_log_uniform(double lo, double hi) {
        const double m = std::exp(uniform(std::log(lo), std::log(hi)));
        return next_unit() < 0.5 ? -m : m;
    }

    double normal(double sigma) {
        // Box-Muller; one draw per call keeps the stream layout simple.
        double u1 = next_unit();
        if (u1 < 1e-300) u1 = 1e-300;
        const double u2 = next_unit();
        return sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

private:
    std::uint64_t state_;
};

// Independent stream for sample index i of a seeded suite.
inline SplitMix64 stream_for(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 mix(seed ^ (0x632be59bd9b4e019ULL * (index + 1)));
    mix.next_u64();
    return mix;
}

}  // namespace lmc
