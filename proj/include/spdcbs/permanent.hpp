#pragma once

#include <bit>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "spdcbs/errors.hpp"
#include "spdcbs/matrix.hpp"

namespace spdcbs {

// Size caps for the exponential-cost kernels. Both are overridable; the
// defaults keep desk-scale runs under minutes.
struct ResourceCaps {
    int permanent_max_dim = 20;
    long long enumeration_max_entries = 2'000'000;
};

// Permanent of a square complex matrix by Ryser's inclusion-exclusion
// formula. Column subsets are visited in Gray-code order so each step
// updates the n row sums with a single add or subtract, giving O(2^n n)
// instead of O(2^n n^2). The empty matrix has permanent 1.
inline std::complex<double> permanent(const ComplexMatrix& a, const ResourceCaps& caps = {}) {
    if (a.rows() != a.cols()) throw std::invalid_argument("permanent: matrix must be square");
    const int n = a.rows();
    if (n > caps.permanent_max_dim) {
        throw ResourceLimit(n, caps.permanent_max_dim,
                            "permanent: dimension " + std::to_string(n) +
                                " exceeds the cap of " + std::to_string(caps.permanent_max_dim));
    }
    if (n == 0) return 1.0;

    std::vector<std::complex<double>> row_sums(n, 0.0);
    std::complex<double> total = 0.0;
    std::uint64_t prev_gray = 0;
    const std::uint64_t subset_count = std::uint64_t{1} << n;

    for (std::uint64_t k = 1; k < subset_count; ++k) {
        const std::uint64_t gray = k ^ (k >> 1);
        const std::uint64_t changed = gray ^ prev_gray;
        const int column = std::countr_zero(changed);
        const double direction = (gray & changed) ? 1.0 : -1.0;
        for (int i = 0; i < n; ++i) row_sums[i] += direction * a(i, column);
        prev_gray = gray;

        std::complex<double> product = row_sums[0];
        for (int i = 1; i < n; ++i) product *= row_sums[i];

        // Ryser sign: (-1)^(n - |S|).
        if ((n - std::popcount(gray)) & 1) {
            total -= product;
        } else {
            total += product;
        }
    }
    return total;
}

}  // namespace spdcbs
