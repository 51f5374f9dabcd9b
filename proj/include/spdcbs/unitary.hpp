#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "spdcbs/matrix.hpp"
#include "spdcbs/rng.hpp"

namespace spdcbs {

// Haar-distributed m x m unitary: orthonormalize a complex Gaussian matrix
// column by column (two Gram-Schmidt passes). The residual norms play the
// role of a positive real diagonal for R, which is exactly the
// phase-of-diagonal normalization that makes Q Haar rather than merely
// unitary. Deterministic for a fixed seed.
inline ComplexMatrix haar_unitary(int modes, std::uint64_t seed) {
    if (modes < 1) throw std::domain_error("haar_unitary: mode count must be >= 1");
    RngStream rng(seed);
    ComplexMatrix g(modes, modes);
    for (int i = 0; i < modes; ++i) {
        for (int j = 0; j < modes; ++j) g(i, j) = rng.complex_gaussian();
    }

    for (int j = 0; j < modes; ++j) {
        for (int pass = 0; pass < 2; ++pass) {
            for (int k = 0; k < j; ++k) {
                std::complex<double> overlap = 0.0;
                for (int i = 0; i < modes; ++i) overlap += std::conj(g(i, k)) * g(i, j);
                for (int i = 0; i < modes; ++i) g(i, j) -= overlap * g(i, k);
            }
        }
        double norm_sq = 0.0;
        for (int i = 0; i < modes; ++i) norm_sq += std::norm(g(i, j));
        const double inv_norm = 1.0 / std::sqrt(norm_sq);
        for (int i = 0; i < modes; ++i) g(i, j) *= inv_norm;
    }
    return g;
}

// 50:50 beamsplitter, the real Hadamard-like convention [[1,1],[1,-1]]/sqrt2.
inline ComplexMatrix balanced_beamsplitter() {
    ComplexMatrix u(2, 2);
    const double s = std::numbers::sqrt2 / 2.0;
    u(0, 0) = s;
    u(0, 1) = s;
    u(1, 0) = s;
    u(1, 1) = -s;
    return u;
}

// One two-mode element of the triangular mesh: modes (mode_a, mode_a+1) mix
// with angle theta and relative phase phi. The forward matrix on the pair is
//   [ cos t   -e^{-i phi} sin t ]
//   [ e^{i phi} sin t    cos t  ].
struct TwoModeRotation {
    int mode_a = 0;
    int mode_b = 0;
    double theta = 0.0;
    double phi = 0.0;
};

struct ReckDecomposition {
    int modes = 0;
    std::vector<TwoModeRotation> rotations;  // applied left to right
    std::vector<double> output_phases;

    std::size_t element_count() const { return rotations.size(); }

    std::size_t nontrivial_rotation_count(double tol = 1e-12) const {
        std::size_t n = 0;
        for (const auto& rot : rotations) {
            if (std::abs(rot.theta) > tol) ++n;
        }
        return n;
    }

    // Rebuild the unitary: U = R_1 R_2 ... R_K diag(e^{i phase}).
    ComplexMatrix recompose() const {
        ComplexMatrix u(modes, modes);
        for (int i = 0; i < modes; ++i) {
            u(i, i) = std::polar(1.0, output_phases[i]);
        }
        for (auto it = rotations.rbegin(); it != rotations.rend(); ++it) {
            const double c = std::cos(it->theta);
            const double s = std::sin(it->theta);
            const std::complex<double> phase = std::polar(1.0, it->phi);
            for (int j = 0; j < modes; ++j) {
                const std::complex<double> top = u(it->mode_a, j);
                const std::complex<double> bottom = u(it->mode_b, j);
                u(it->mode_a, j) = c * top - std::conj(phase) * s * bottom;
                u(it->mode_b, j) = phase * s * top + c * bottom;
            }
        }
        return u;
    }
};

// Reck-style factorization into at most m(m-1)/2 nearest-neighbour rotations
// plus m output phases. The lower triangle is eliminated column by column
// from the bottom row upward; a unitary matrix with zero lower triangle is
// diagonal, and its phases become the output phases. Identity-angle
// rotations are recorded so the element count is always m(m-1)/2.
inline ReckDecomposition reck_decompose(const ComplexMatrix& u, double unitarity_tol = 1e-10) {
    if (u.rows() != u.cols()) throw std::invalid_argument("reck_decompose: matrix must be square");
    if (u.unitarity_error() > unitarity_tol) {
        throw std::invalid_argument("reck_decompose: input matrix is not unitary");
    }
    const int m = u.rows();
    ComplexMatrix work = u;
    ReckDecomposition decomp;
    decomp.modes = m;
    decomp.rotations.reserve(static_cast<std::size_t>(m) * (m - 1) / 2);

    for (int col = 0; col < m - 1; ++col) {
        for (int row = m - 1; row > col; --row) {
            // Null work(row, col) against work(row-1, col) by a rotation on
            // the adjacent row pair.
            const std::complex<double> above = work(row - 1, col);
            const std::complex<double> target = work(row, col);
            double theta = 0.0, phi = 0.0;
            if (std::abs(target) > 0.0) {
                if (std::abs(above) > 0.0) {
                    theta = std::atan2(std::abs(target), std::abs(above));
                    phi = std::arg(target) - std::arg(above);
                } else {
                    theta = std::numbers::pi / 2.0;
                }
            }
            decomp.rotations.push_back(TwoModeRotation{row - 1, row, theta, phi});

            const double c = std::cos(theta);
            const double s = std::sin(theta);
            const std::complex<double> phase = std::polar(1.0, phi);
            for (int j = 0; j < m; ++j) {
                const std::complex<double> top = work(row - 1, j);
                const std::complex<double> bottom = work(row, j);
                work(row - 1, j) = c * top + std::conj(phase) * s * bottom;
                work(row, j) = -phase * s * top + c * bottom;
            }
            work(row, col) = 0.0;  // eliminated exactly by construction
        }
    }

    decomp.output_phases.resize(m);
    for (int i = 0; i < m; ++i) decomp.output_phases[i] = std::arg(work(i, i));
    return decomp;
}

}  // namespace spdcbs
