#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include "falpha/errors.hpp"

namespace falpha {

using Vec = std::vector<double>;
using CVec = std::vector<std::complex<double>>;

// Row-major dense matrix; everything here targets small n (the solver caps
// dimension at 12), so plain O(n^3) kernels are used throughout.
template <typename T>
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, T fill = T{})
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static DenseMatrix identity(std::size_t n) {
        DenseMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    DenseMatrix operator*(const DenseMatrix& rhs) const {
        DenseMatrix out(rows_, rhs.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                T aik = (*this)(i, k);
                if (aik == T{}) continue;
                for (std::size_t j = 0; j < rhs.cols_; ++j) out(i, j) += aik * rhs(k, j);
            }
        return out;
    }

    std::vector<T> operator*(const std::vector<T>& v) const {
        std::vector<T> out(rows_, T{});
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * v[j];
        return out;
    }

    T trace() const {
        T t{};
        for (std::size_t i = 0; i < rows_ && i < cols_; ++i) t += (*this)(i, i);
        return t;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using Mat = DenseMatrix<double>;
using CMat = DenseMatrix<std::complex<double>>;

double inf_norm(const Mat& a);
double inf_norm(const CMat& a);
double inf_norm(const Vec& v);
double inf_norm(const CVec& v);

CMat complexify(const Mat& a);
CMat shifted(const Mat& a, std::complex<double> r);  // A - r I

// Determinant by partial-pivot LU; exact zero for structurally singular input.
double lu_determinant(Mat a);

// Solves a x = b by Gaussian elimination with partial pivoting.
// Throws NumericError when a pivot vanishes.
Vec solve_linear(Mat a, Vec b);

// Nullspace basis of a (complex) matrix: elimination with partial pivoting,
// pivots below pivot_tol treated as zero, one basis vector per free column
// (unit coordinate there, zeros at the other free columns).
std::vector<CVec> nullspace_basis(CMat a, double pivot_tol);

// Particular solution of a x = b with free variables fixed to zero, or
// nullopt when the system is inconsistent at the pivot tolerance.
std::optional<CVec> solve_free_vars_zero(CMat a, CVec b, double pivot_tol);

// One inverse-iteration step: solve (a) w = v with vanishing pivots floored,
// returning w normalized to unit max-magnitude component.
CVec inverse_iteration_step(CMat a, const CVec& v);

}  // namespace falpha
