#pragma once

#include <utility>

#include "falpha/ifs.hpp"

namespace falpha {

// Result of the mass-function refinement for one alpha. `value` may be the
// +infinity sentinel when the refinement sequence diverges past the
// divergence threshold.
struct MassEstimate {
    double value = 0.0;
    double alpha = 0.0;
    int depth_used = 0;
    bool converged = false;
    double successive_delta = 0.0;  // |last change| between refinements
};

struct MassOptions {
    int max_depth = 200;
    double divergence_threshold = 1e12;
};

struct DimensionEstimate {
    double alpha_hat = 0.0;
    std::pair<double, double> bracket = {0.0, 0.0};
    int iterations = 0;
};

// Coarse-grained mass over [a, b] against the approximation's aligned
// partition: breakpoints at the retained-interval endpoints clipped to
// [a, b]; retained pieces longer than `mesh` are split into the fewest equal
// parts not exceeding it; gap pieces contribute nothing.
double coarse_mass(const IntervalApprox& approx, double alpha, double a, double b,
                   double mesh);

// Mass function gamma^alpha(F, a, b): coarse masses along the geometric
// refinement mesh_k = (max ratio)^k * base length, stopping when two
// successive values differ by at most tol.
MassEstimate mass(const IfsSpec& spec, double alpha, double a, double b, double tol,
                  const MassOptions& options = {});

// Gamma-dimension of F intersected with [a, b] by bisection on alpha:
// below the dimension the refinement sequence grows, above it decays.
// Requires tol >= 1e-6.
DimensionEstimate gamma_dimension(const IfsSpec& spec, double a, double b, double tol);

namespace detail {
// Sum of (clipped piece length)^alpha over the depth-k aligned partition,
// computed by descending the construction tree (no interval
// materialization); pieces wholly inside [a, b] use the closed self-similar
// form. coarse_mass agrees with tgamma(alpha+1) times this value whenever the
// approximation is materializable and mesh is at least the widest interval.
double aligned_sum(const IfsSpec& spec, int depth, double alpha, double a, double b);
}  // namespace detail

}  // namespace falpha
