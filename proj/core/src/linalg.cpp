#include "falpha/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace falpha {
namespace {

template <typename T>
double row_abs_sum(const DenseMatrix<T>& a, std::size_t i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += std::abs(a(i, j));
    return s;
}

template <typename T>
double inf_norm_impl(const DenseMatrix<T>& a) {
    double best = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) best = std::max(best, row_abs_sum(a, i));
    return best;
}

// Row echelon reduction with partial pivoting, operating on `a` (and the
// optional right-hand side) in place. Returns the pivot column per pivot row.
std::vector<std::size_t> echelon(CMat& a, CVec* rhs, double pivot_tol) {
    const std::size_t m = a.rows(), n = a.cols();
    std::vector<std::size_t> pivot_cols;
    std::size_t row = 0;
    for (std::size_t col = 0; col < n && row < m; ++col) {
        std::size_t best = row;
        for (std::size_t i = row + 1; i < m; ++i)
            if (std::abs(a(i, col)) > std::abs(a(best, col))) best = i;
        if (std::abs(a(best, col)) <= pivot_tol) continue;
        if (best != row) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(row, j), a(best, j));
            if (rhs) std::swap((*rhs)[row], (*rhs)[best]);
        }
        for (std::size_t i = 0; i < m; ++i) {
            if (i == row) continue;
            std::complex<double> factor = a(i, col) / a(row, col);
            if (factor == std::complex<double>{}) continue;
            for (std::size_t j = col; j < n; ++j) a(i, j) -= factor * a(row, j);
            a(i, col) = 0.0;
            if (rhs) (*rhs)[i] -= factor * (*rhs)[row];
        }
        pivot_cols.push_back(col);
        ++row;
    }
    return pivot_cols;
}

}  // namespace

double inf_norm(const Mat& a) { return inf_norm_impl(a); }
double inf_norm(const CMat& a) { return inf_norm_impl(a); }

double inf_norm(const Vec& v) {
    double best = 0.0;
    for (double x : v) best = std::max(best, std::abs(x));
    return best;
}

double inf_norm(const CVec& v) {
    double best = 0.0;
    for (const auto& x : v) best = std::max(best, std::abs(x));
    return best;
}

CMat complexify(const Mat& a) {
    CMat out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
    return out;
}

CMat shifted(const Mat& a, std::complex<double> r) {
    CMat out = complexify(a);
    for (std::size_t i = 0; i < a.rows(); ++i) out(i, i) -= r;
    return out;
}

double lu_determinant(Mat a) {
    const std::size_t n = a.rows();
    double det = 1.0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t best = col;
        for (std::size_t i = col + 1; i < n; ++i)
            if (std::abs(a(i, col)) > std::abs(a(best, col))) best = i;
        if (a(best, col) == 0.0) return 0.0;
        if (best != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(col, j), a(best, j));
            det = -det;
        }
        det *= a(col, col);
        for (std::size_t i = col + 1; i < n; ++i) {
            double factor = a(i, col) / a(col, col);
            for (std::size_t j = col + 1; j < n; ++j) a(i, j) -= factor * a(col, j);
        }
    }
    return det;
}

Vec solve_linear(Mat a, Vec b) {
    const std::size_t n = a.rows();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t best = col;
        for (std::size_t i = col + 1; i < n; ++i)
            if (std::abs(a(i, col)) > std::abs(a(best, col))) best = i;
        if (a(best, col) == 0.0) throw NumericError("solve_linear: singular matrix");
        if (best != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(col, j), a(best, j));
            std::swap(b[col], b[best]);
        }
        for (std::size_t i = col + 1; i < n; ++i) {
            double factor = a(i, col) / a(col, col);
            for (std::size_t j = col; j < n; ++j) a(i, j) -= factor * a(col, j);
            b[i] -= factor * b[col];
        }
    }
    Vec x(n, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
        x[i] = s / a(i, i);
    }
    return x;
}

std::vector<CVec> nullspace_basis(CMat a, double pivot_tol) {
    const std::size_t n = a.cols();
    std::vector<std::size_t> pivot_cols = echelon(a, nullptr, pivot_tol);
    std::vector<bool> is_pivot(n, false);
    for (std::size_t c : pivot_cols) is_pivot[c] = true;

    std::vector<CVec> basis;
    for (std::size_t fc = 0; fc < n; ++fc) {
        if (is_pivot[fc]) continue;
        CVec x(n, 0.0);
        x[fc] = 1.0;
        for (std::size_t p = 0; p < pivot_cols.size(); ++p) {
            std::size_t pc = pivot_cols[p];
            x[pc] = -a(p, fc) / a(p, pc);
        }
        basis.push_back(std::move(x));
    }
    return basis;
}

std::optional<CVec> solve_free_vars_zero(CMat a, CVec b, double pivot_tol) {
    const std::size_t n = a.cols();
    const double scale_a = inf_norm(a);
    const double scale_b = inf_norm(b);
    std::vector<std::size_t> pivot_cols = echelon(a, &b, pivot_tol);

    CVec x(n, 0.0);
    for (std::size_t p = 0; p < pivot_cols.size(); ++p) {
        x[pivot_cols[p]] = b[p] / a(p, pivot_cols[p]);
    }
    // Consistency: residual against the original system, relative to scales.
    double resid = 0.0;
    for (std::size_t i = pivot_cols.size(); i < a.rows(); ++i) {
        resid = std::max(resid, std::abs(b[i]));
    }
    if (resid > 1e-9 * (1.0 + scale_a * inf_norm(x) + scale_b)) return std::nullopt;
    return x;
}

CVec inverse_iteration_step(CMat a, const CVec& v) {
    const std::size_t n = a.rows();
    const double floor_pivot = 1e-14 * (1.0 + inf_norm(a));
    CVec b = v;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t best = col;
        for (std::size_t i = col + 1; i < n; ++i)
            if (std::abs(a(i, col)) > std::abs(a(best, col))) best = i;
        if (best != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(col, j), a(best, j));
            std::swap(b[col], b[best]);
        }
        if (std::abs(a(col, col)) < floor_pivot) a(col, col) = floor_pivot;
        for (std::size_t i = col + 1; i < n; ++i) {
            std::complex<double> factor = a(i, col) / a(col, col);
            for (std::size_t j = col; j < n; ++j) a(i, j) -= factor * a(col, j);
            b[i] -= factor * b[col];
        }
    }
    CVec x(n, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        std::complex<double> s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
        x[i] = s / a(i, i);
    }
    // Normalize to unit max-magnitude component.
    std::size_t arg = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (std::abs(x[i]) > std::abs(x[arg])) arg = i;
    if (std::abs(x[arg]) > 0.0) {
        std::complex<double> d = x[arg];
        for (auto& c : x) c /= d;
    }
    return x;
}

}  // namespace falpha
