// Small dense complex matrices (n <= 5 throughout this project).
// Row-major storage, value semantics; only the handful of operations the
// simulator needs (product, adjoint, unitarity checks).

#pragma once

#include <complex>
#include <initializer_list>
#include <stdexcept>
#include <vector>
#include <cmath>

namespace qecp {

using Cx = std::complex<double>;

class Matrix {
public:
    Matrix() = default;

    Matrix(int rows, int cols)
        : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols) {
        if (rows <= 0 || cols <= 0)
            throw std::invalid_argument("Matrix: non-positive dimension");
    }

    // Row-major nested initializer, e.g. Matrix{{a,b},{c,d}}.
    Matrix(std::initializer_list<std::initializer_list<Cx>> rows) {
        rows_ = static_cast<int>(rows.size());
        if (rows_ == 0) throw std::invalid_argument("Matrix: empty init");
        cols_ = static_cast<int>(rows.begin()->size());
        data_.reserve(static_cast<size_t>(rows_) * cols_);
        for (const auto& r : rows) {
            if (static_cast<int>(r.size()) != cols_)
                throw std::invalid_argument("Matrix: ragged init");
            data_.insert(data_.end(), r.begin(), r.end());
        }
    }

    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Cx& operator()(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
    const Cx& operator()(int i, int j) const { return data_[static_cast<size_t>(i) * cols_ + j]; }

    Cx at(int i, int j) const {
        if (i < 0 || i >= rows_ || j < 0 || j >= cols_)
            throw std::out_of_range("Matrix::at");
        return (*this)(i, j);
    }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<Cx> data_;
};

inline Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows())
        throw std::invalid_argument("Matrix product: dimension mismatch");
    Matrix c(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int k = 0; k < a.cols(); ++k) {
            const Cx aik = a(i, k);
            if (aik == Cx{}) continue;
            for (int j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

inline Matrix operator*(Cx s, const Matrix& a) {
    Matrix c(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) c(i, j) = s * a(i, j);
    return c;
}

inline Matrix adjoint(const Matrix& a) {
    Matrix c(a.cols(), a.rows());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) c(j, i) = std::conj(a(i, j));
    return c;
}

// max_ij |a_ij - b_ij|
inline double max_abs_diff(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("max_abs_diff: shape mismatch");
    double m = 0.0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
    return m;
}

// Element-wise deviation of U†U from the identity.
inline double unitarity_defect(const Matrix& u) {
    if (u.rows() != u.cols())
        throw std::invalid_argument("unitarity_defect: square matrix required");
    return max_abs_diff(adjoint(u) * u, Matrix::identity(u.rows()));
}

inline bool is_unitary(const Matrix& u, double tol) {
    return unitarity_defect(u) <= tol;
}

inline bool all_finite(const Matrix& a) {
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            if (!std::isfinite(a(i, j).real()) || !std::isfinite(a(i, j).imag())) return false;
    return true;
}

}  // namespace qecp
