#pragma once

// Test-only oracles, deliberately independent of the library's code paths:
// a factorial-time permanent, brute-force loss enumeration, a direct binomial
// tail, and a chi-square goodness-of-fit p-value.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "spdcbs/matrix.hpp"
#include "spdcbs/rng.hpp"

namespace test_helpers {

// Permanent by the definition: sum over all permutations of column products.
inline std::complex<double> naive_permanent(const spdcbs::ComplexMatrix& a) {
    const int n = a.rows();
    if (n == 0) return 1.0;
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::complex<double> total = 0.0;
    do {
        std::complex<double> product = 1.0;
        for (int i = 0; i < n; ++i) product *= a(i, perm[i]);
        total += product;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

inline spdcbs::ComplexMatrix random_complex_matrix(int n, std::uint64_t seed) {
    spdcbs::RngStream rng(seed);
    spdcbs::ComplexMatrix a(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) a(i, j) = rng.complex_gaussian();
    }
    return a;
}

// P(t photons detected out of s) by enumerating every per-photon
// survive/lose pattern.
inline std::vector<double> brute_force_detection_pmf(double eta, int emitted) {
    std::vector<double> pmf(emitted + 1, 0.0);
    const std::uint64_t patterns = std::uint64_t{1} << emitted;
    for (std::uint64_t mask = 0; mask < patterns; ++mask) {
        int survivors = 0;
        double prob = 1.0;
        for (int k = 0; k < emitted; ++k) {
            if (mask & (std::uint64_t{1} << k)) {
                prob *= eta;
                ++survivors;
            } else {
                prob *= 1.0 - eta;
            }
        }
        pmf[survivors] += prob;
    }
    return pmf;
}

// P(X >= k), X ~ Binomial(n, p), summed term by term with direct
// coefficients; fine for the small n used in cross-checks.
inline double direct_binomial_upper_tail(int n, int k, double p) {
    double total = 0.0;
    for (int i = std::max(k, 0); i <= n; ++i) {
        double coeff = 1.0;
        for (int j = 1; j <= i; ++j) coeff *= static_cast<double>(n - i + j) / j;
        total += coeff * std::pow(p, i) * std::pow(1.0 - p, n - i);
    }
    return total;
}

// Regularized upper incomplete gamma Q(a, x) via the usual series /
// continued-fraction split.
inline double gamma_q(double a, double x) {
    if (x < 0.0 || a <= 0.0) throw std::invalid_argument("gamma_q: bad arguments");
    if (x == 0.0) return 1.0;
    const double log_gamma_a = std::lgamma(a);
    if (x < a + 1.0) {
        // series for P(a, x)
        double term = 1.0 / a;
        double sum = term;
        double ap = a;
        for (int i = 0; i < 500; ++i) {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if (std::abs(term) < std::abs(sum) * 1e-16) break;
        }
        const double p = sum * std::exp(-x + a * std::log(x) - log_gamma_a);
        return 1.0 - p;
    }
    // Lentz continued fraction for Q(a, x)
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + a * std::log(x) - log_gamma_a);
}

// Chi-square goodness-of-fit p-value. Bins whose expected count falls below
// `pool_threshold` are pooled into a single remainder bin.
inline double chi_square_pvalue(const std::vector<long long>& observed,
                                const std::vector<double>& expected_probs, long long total,
                                double pool_threshold = 5.0) {
    if (observed.size() != expected_probs.size()) {
        throw std::invalid_argument("chi_square_pvalue: size mismatch");
    }
    double stat = 0.0;
    int kept = 0;
    double pooled_expected = 0.0;
    long long pooled_observed = 0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        const double expected = expected_probs[i] * static_cast<double>(total);
        if (expected < pool_threshold) {
            pooled_expected += expected;
            pooled_observed += observed[i];
            continue;
        }
        const double diff = static_cast<double>(observed[i]) - expected;
        stat += diff * diff / expected;
        ++kept;
    }
    if (pooled_expected > 0.0) {
        const double diff = static_cast<double>(pooled_observed) - pooled_expected;
        stat += diff * diff / pooled_expected;
        ++kept;
    }
    const int dof = kept - 1;
    if (dof < 1) throw std::invalid_argument("chi_square_pvalue: not enough bins");
    return gamma_q(dof / 2.0, stat / 2.0);
}

}  // namespace test_helpers
