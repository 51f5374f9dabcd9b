#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <utility>

namespace spdcbs {

// SplitMix64 output function.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}

// Stream-splitting rule: child stream k of a master seed is seeded with
// splitmix64(master + (k + 1) * golden_gamma). Every consumer that needs an
// independent stream (one per Monte Carlo trial, one per sampler) derives it
// this way, so results are reproducible for a fixed master seed no matter how
// work is distributed over threads.
inline std::uint64_t stream_seed(std::uint64_t master_seed, std::uint64_t stream_index) {
    constexpr std::uint64_t golden_gamma = 0x9E3779B97F4A7C15ULL;
    return splitmix64(master_seed + (stream_index + 1) * golden_gamma);
}

// Seeded generator with platform-independent draws. std::mt19937_64 itself is
// fully specified by the standard; the distribution transforms below are our
// own because the std::*_distribution mappings are implementation-defined and
// would break bit-reproducibility across standard libraries.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : gen_(seed) {}
    RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
        : gen_(stream_seed(master_seed, stream_index)) {}

    // Uniform in [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

    // Per-event Bernoulli counting; draws exactly `trials` uniforms.
    int binomial(int trials, double p) {
        int hits = 0;
        for (int i = 0; i < trials; ++i) {
            if (bernoulli(p)) ++hits;
        }
        return hits;
    }

    // Box-Muller pair of independent standard normals.
    std::pair<double, double> normal_pair() {
        const double u1 = 1.0 - uniform();  // (0, 1], keeps the log finite
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        return {radius * std::cos(angle), radius * std::sin(angle)};
    }

    // Standard complex normal: real and imaginary parts N(0, 1/2).
    std::complex<double> complex_gaussian() {
        auto [x, y] = normal_pair();
        return {x * std::numbers::sqrt2 / 2.0, y * std::numbers::sqrt2 / 2.0};
    }

    std::uint64_t raw() { return gen_(); }

private:
    std::mt19937_64 gen_;
};

}  // namespace spdcbs
