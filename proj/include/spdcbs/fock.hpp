#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "spdcbs/errors.hpp"

namespace spdcbs {

// Occupation-number configuration over a fixed set of modes. Mode order is
// canonical: two states are equal iff their occupation vectors are equal,
// and ordering is lexicographic on the vector.
struct FockState {
    std::vector<int> occupations;

    int mode_count() const { return static_cast<int>(occupations.size()); }
    int total_photons() const {
        return std::accumulate(occupations.begin(), occupations.end(), 0);
    }

    bool operator==(const FockState&) const = default;
    auto operator<=>(const FockState&) const = default;
};

// |1,...,1,0,...,0>: single photons in the first `photons` modes.
inline FockState single_photon_input(int photons, int modes) {
    if (photons < 0 || modes < photons) {
        throw std::invalid_argument("single_photon_input: requires 0 <= photons <= modes");
    }
    FockState state{std::vector<int>(modes, 0)};
    for (int i = 0; i < photons; ++i) state.occupations[i] = 1;
    return state;
}

// Number of ways to place `photons` identical photons in `modes` modes:
// C(photons + modes - 1, photons). Saturates at uint64 max on overflow.
inline std::uint64_t configuration_count(int photons, int modes) {
    if (photons < 0 || modes < 1) {
        throw std::invalid_argument("configuration_count: requires photons >= 0 and modes >= 1");
    }
    const std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t count = 1;
    for (int i = 1; i <= photons; ++i) {
        const std::uint64_t numer = static_cast<std::uint64_t>(modes - 1 + i);
        if (count > kMax / numer) return kMax;
        count = count * numer / static_cast<std::uint64_t>(i);
    }
    return count;
}

// All configurations of `photons` photons over `modes` modes in ascending
// lexicographic order, starting at (0,...,0,photons). Throws ResourceLimit
// when the count exceeds `cap`.
inline std::vector<FockState> enumerate_configurations(int photons, int modes,
                                                       long long cap = 2'000'000) {
    const std::uint64_t count = configuration_count(photons, modes);
    if (cap >= 0 && count > static_cast<std::uint64_t>(cap)) {
        throw ResourceLimit(static_cast<long long>(count), cap,
                            "enumerate_configurations: " + std::to_string(count) +
                                " configurations exceed the enumeration cap of " +
                                std::to_string(cap));
    }
    std::vector<FockState> out;
    out.reserve(static_cast<std::size_t>(count));
    std::vector<int> occ(modes, 0);
    // Fill mode by mode; ascending occupancy in earlier modes gives lex order.
    auto fill = [&](auto&& self, int mode, int remaining) -> void {
        if (mode == modes - 1) {
            occ[mode] = remaining;
            out.push_back(FockState{occ});
            return;
        }
        for (int k = 0; k <= remaining; ++k) {
            occ[mode] = k;
            self(self, mode + 1, remaining - k);
        }
    };
    fill(fill, 0, photons);
    return out;
}

}  // namespace spdcbs
