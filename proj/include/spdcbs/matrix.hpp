#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <vector>

namespace spdcbs {

// Dense row-major complex matrix, sized for interferometers (tens of modes).
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(int rows, int cols)
        : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols) {
        if (rows < 0 || cols < 0) throw std::invalid_argument("ComplexMatrix: negative size");
    }

    static ComplexMatrix identity(int n) {
        ComplexMatrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    std::complex<double>& operator()(int i, int j) {
        return data_[static_cast<std::size_t>(i) * cols_ + j];
    }
    const std::complex<double>& operator()(int i, int j) const {
        return data_[static_cast<std::size_t>(i) * cols_ + j];
    }

    ComplexMatrix adjoint() const {
        ComplexMatrix out(cols_, rows_);
        for (int i = 0; i < rows_; ++i) {
            for (int j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
        }
        return out;
    }

    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("ComplexMatrix: size mismatch");
        ComplexMatrix out(a.rows_, b.cols_);
        for (int i = 0; i < a.rows_; ++i) {
            for (int k = 0; k < a.cols_; ++k) {
                const std::complex<double> aik = a(i, k);
                for (int j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
            }
        }
        return out;
    }

    // max_ij |(U^dagger U - I)_ij|
    double unitarity_error() const {
        if (rows_ != cols_) return std::numeric_limits<double>::infinity();
        const ComplexMatrix gram = adjoint() * (*this);
        double worst = 0.0;
        for (int i = 0; i < rows_; ++i) {
            for (int j = 0; j < cols_; ++j) {
                const std::complex<double> expected = (i == j) ? 1.0 : 0.0;
                worst = std::max(worst, std::abs(gram(i, j) - expected));
            }
        }
        return worst;
    }

    double frobenius_distance(const ComplexMatrix& other) const {
        if (rows_ != other.rows_ || cols_ != other.cols_) {
            throw std::invalid_argument("ComplexMatrix: size mismatch");
        }
        double sum = 0.0;
        for (std::size_t k = 0; k < data_.size(); ++k) {
            sum += std::norm(data_[k] - other.data_[k]);
        }
        return std::sqrt(sum);
    }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<std::complex<double>> data_;
};

}  // namespace spdcbs
