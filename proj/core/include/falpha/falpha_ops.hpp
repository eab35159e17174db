#pragma once

#include <functional>
#include <vector>

#include "falpha/staircase.hpp"

namespace falpha {

// Deterministic scalar function on the ambient interval containing F.
struct SampledFn {
    std::function<double(double)> evaluator;
    Interval domain;

    double operator()(double t) const { return evaluator(t); }
};

// Rectangular grid of scalar functions sharing one domain (a fractal matrix;
// a single column is a fractal vector).
struct FractalMatrixFn {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<SampledFn> entries;  // row-major

    const SampledFn& at(std::size_t i, std::size_t j) const {
        return entries[i * cols + j];
    }
};

struct DerivEstimate {
    double value = 0.0;
    double step_used = 0.0;  // |neighbor - x| of the final quotient
    double neighbor = 0.0;   // the y point actually used
};

struct DerivOptions {
    double rtol = 1e-8;
    double atol = 1e-12;
    int max_refinements = 48;
};

// Lower/upper Darboux-type sums against staircase increments; the reported
// integral is the midpoint, upper - lower the error bound.
struct IntegralBounds {
    double lower = 0.0;
    double upper = 0.0;

    double value() const noexcept { return 0.5 * (lower + upper); }
    double width() const noexcept { return upper - lower; }
};

// F^alpha-derivative at x: difference quotients (f(y)-f(x))/(S(y)-S(x))
// through attractor points y approaching x geometrically, accepted once two
// successive quotients agree to tolerance, with one extrapolation step on the
// accepted tail. Returns 0 when x lies outside the set at working depth.
DerivEstimate f_alpha_derivative(const SampledFn& f, const Staircase& stair, double x,
                                 const DerivOptions& options = {});

// Darboux bracket of the F^alpha-integral over [a, b] against the depth-k
// aligned partition. Extrema over each retained fragment are sampled at its
// endpoints and midpoint; gap pieces carry zero staircase increment.
IntegralBounds f_alpha_integral(const SampledFn& f, const Staircase& stair, double a,
                                double b, int depth);

// Refines the partition depth until the bracket width is at most tol; throws
// ConvergenceError carrying both sums if max_depth does not suffice.
IntegralBounds f_alpha_integral_to_tol(const SampledFn& f, const Staircase& stair,
                                       double a, double b, double tol,
                                       int max_depth = 22);

// Element-wise derivative/integral; element failures are rethrown with
// (row, col) context.
std::vector<std::vector<double>> matrix_derivative(const FractalMatrixFn& A,
                                                   const Staircase& stair, double x,
                                                   const DerivOptions& options = {});

std::pair<std::vector<std::vector<double>>, std::vector<std::vector<double>>>
matrix_integral(const FractalMatrixFn& A, const Staircase& stair, double a, double b,
                int depth);

}  // namespace falpha
