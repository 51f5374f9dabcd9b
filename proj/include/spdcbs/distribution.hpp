#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "spdcbs/fock.hpp"
#include "spdcbs/matrix.hpp"
#include "spdcbs/permanent.hpp"
#include "spdcbs/rng.hpp"

namespace spdcbs {

namespace detail {

// Submatrix with row i of u repeated input[i] times and column j repeated
// output[j] times; its permanent carries the transition amplitude.
inline ComplexMatrix transition_submatrix(const ComplexMatrix& u, const FockState& input,
                                          const FockState& output) {
    const int n = input.total_photons();
    ComplexMatrix sub(n, n);
    int row = 0;
    for (int i = 0; i < input.mode_count(); ++i) {
        for (int rep = 0; rep < input.occupations[i]; ++rep, ++row) {
            int col = 0;
            for (int j = 0; j < output.mode_count(); ++j) {
                for (int out_rep = 0; out_rep < output.occupations[j]; ++out_rep, ++col) {
                    sub(row, col) = u(i, j);
                }
            }
        }
    }
    return sub;
}

inline double occupation_factorial_product(const FockState& state) {
    double product = 1.0;
    for (int occ : state.occupations) {
        for (int k = 2; k <= occ; ++k) product *= k;
    }
    return product;
}

}  // namespace detail

// Transition amplitude between Fock states through the interferometer u:
// Per(submatrix) / sqrt(prod_i in_i! prod_j out_j!).
inline std::complex<double> output_amplitude(const ComplexMatrix& u, const FockState& input,
                                             const FockState& output,
                                             const ResourceCaps& caps = {}) {
    if (u.rows() != u.cols()) throw std::invalid_argument("output_amplitude: u must be square");
    if (input.mode_count() != u.rows() || output.mode_count() != u.rows()) {
        throw std::invalid_argument("output_amplitude: mode counts must match u");
    }
    if (input.total_photons() != output.total_photons()) {
        throw std::domain_error("output_amplitude: photon number mismatch between input and output");
    }
    const std::complex<double> per = permanent(detail::transition_submatrix(u, input, output), caps);
    const double norm = std::sqrt(detail::occupation_factorial_product(input) *
                                  detail::occupation_factorial_product(output));
    return per / norm;
}

// Exact output distribution over every photon-number configuration, in
// ascending lexicographic order. `cumulative` holds the running sum used for
// inverse-CDF sampling.
struct OutputDistribution {
    FockState input;
    std::vector<FockState> configurations;
    std::vector<double> probabilities;
    std::vector<double> cumulative;

    std::size_t size() const { return configurations.size(); }

    double total() const {
        return cumulative.empty() ? 0.0 : cumulative.back();
    }
};

inline OutputDistribution output_distribution(const ComplexMatrix& u, const FockState& input,
                                              const ResourceCaps& caps = {}) {
    const int photons = input.total_photons();
    OutputDistribution dist;
    dist.input = input;
    dist.configurations =
        enumerate_configurations(photons, u.rows(), caps.enumeration_max_entries);
    dist.probabilities.reserve(dist.configurations.size());
    dist.cumulative.reserve(dist.configurations.size());
    double running = 0.0;
    for (const FockState& output : dist.configurations) {
        const double p = std::norm(output_amplitude(u, input, output, caps));
        dist.probabilities.push_back(p);
        running += p;
        dist.cumulative.push_back(running);
    }
    if (std::abs(running - 1.0) > 1e-9) {
        throw std::runtime_error("output_distribution: probabilities sum to " +
                                 std::to_string(running) + ", expected 1");
    }
    return dist;
}

// One inverse-CDF draw.
inline const FockState& sample_one(const OutputDistribution& dist, RngStream& rng) {
    if (dist.configurations.empty()) {
        throw std::logic_error("sample_one: empty distribution");
    }
    const double u = rng.uniform() * dist.total();
    const auto it = std::upper_bound(dist.cumulative.begin(), dist.cumulative.end(), u);
    const std::size_t idx = std::min<std::size_t>(it - dist.cumulative.begin(),
                                                  dist.configurations.size() - 1);
    return dist.configurations[idx];
}

// `count` inverse-CDF draws from a dedicated stream; deterministic per seed.
inline std::vector<FockState> sample_output(const OutputDistribution& dist, std::uint64_t seed,
                                            long long count) {
    if (count < 0) throw std::invalid_argument("sample_output: count must be >= 0");
    RngStream rng(seed);
    std::vector<FockState> samples;
    samples.reserve(static_cast<std::size_t>(count));
    for (long long i = 0; i < count; ++i) samples.push_back(sample_one(dist, rng));
    return samples;
}

}  // namespace spdcbs
