#include "falpha/falpha_ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace falpha {
namespace {

double eval_checked(const SampledFn& f, double t) {
    double v = f.evaluator(t);
    if (!std::isfinite(v)) {
        std::ostringstream msg;
        msg << "falpha_ops: function not finite at t = " << t;
        throw ArgumentError(msg.str());
    }
    return v;
}

}  // namespace

DerivEstimate f_alpha_derivative(const SampledFn& f, const Staircase& stair, double x,
                                 const DerivOptions& options) {
    const IfsSpec& spec = stair.spec();
    const int working_depth = stair.evaluation_depth();
    if (!in_attractor(spec, x, working_depth)) {
        return {0.0, 0.0, x};  // derivative is 0 off the set
    }
    const double fx = eval_checked(f, x);
    const double sx = staircase_eval(stair, x);

    // Neighbors descend one construction level per refinement: they are
    // interval endpoints, hence points of F, and |y - x| shrinks by the map
    // ratio each step.
    std::vector<double> quotients;
    quotients.reserve(static_cast<std::size_t>(options.max_refinements));
    double last_neighbor = x;
    double last_ds = 0.0;
    bool any_increment = false;
    const double eps = std::numeric_limits<double>::epsilon();
    const int deepest = std::max(4, stair.evaluation_depth() - 6);
    for (int k = 0; k < options.max_refinements; ++k) {
        int level = std::min(k + 1, deepest);
        Interval cover = covering_interval(spec, x, level);
        double y = (x - cover.left >= cover.right - x) ? cover.left : cover.right;
        if (y == x || y == last_neighbor) continue;  // no new quotient information
        double sy = staircase_eval(stair, y);
        double ds = sy - sx;
        if (ds == 0.0) continue;
        any_increment = true;
        double fy = eval_checked(f, y);
        double q = (fy - fx) / ds;
        // Rounding floor of the quotient: cancellation in both differences.
        double noise = 4.0 * eps * (std::abs(fy) + std::abs(fx) +
                                    (std::abs(sy) + std::abs(sx)) * std::abs(q)) /
                       std::abs(ds);
        if (!quotients.empty()) {
            double prev_q = quotients.back();
            if (std::abs(q - prev_q) <=
                options.rtol * std::abs(prev_q) + options.atol + noise) {
                // Richardson step with the measured staircase increments
                // (quotient error is first order in dS).
                double refined = q;
                if (last_ds != ds) {
                    double candidate = q + (q - prev_q) * ds / (last_ds - ds);
                    if (std::abs(candidate - q) <= 4.0 * std::abs(q - prev_q)) {
                        refined = candidate;
                    }
                }
                return {refined, std::abs(y - x), y};
            }
        }
        quotients.push_back(q);
        last_neighbor = y;
        last_ds = ds;
    }
    if (!any_increment) {
        throw DegeneratePointError(
            "f_alpha_derivative: staircase increment vanished for every candidate "
            "neighbor");
    }
    throw ConvergenceError("f_alpha_derivative: quotients did not settle within " +
                               std::to_string(options.max_refinements) + " refinements",
                           quotients);
}

namespace {

struct IntegralWalker {
    const SampledFn& f;
    const Staircase& stair;
    double a, b;
    int depth;
    double lower = 0.0;
    double upper = 0.0;

    void leaf(double lo, double hi, double ds) {
        if (!(ds > 0.0)) return;
        // Extrema are taken over F intersected with the fragment, so the
        // midpoint sample is snapped into the set (a raw midpoint usually
        // sits in a gap, where Def.-7-style integrands vanish).
        double mid = attractor_point_near(stair.spec(), 0.5 * (lo + hi),
                                          0.5 * (hi - lo) + 1e-300);
        mid = std::clamp(mid, lo, hi);
        double f_lo = eval_checked(f, lo);
        double f_hi = eval_checked(f, hi);
        double f_mid = eval_checked(f, mid);
        lower += std::min({f_lo, f_mid, f_hi}) * ds;
        upper += std::max({f_lo, f_mid, f_hi}) * ds;
    }

    // cur: construction interval at `level` carrying staircase mass m.
    void walk(const Interval& cur, double m, int level) {
        double lo = std::max(cur.left, a);
        double hi = std::min(cur.right, b);
        if (!(hi > lo) || !(m > 0.0)) return;
        if (level == depth) {
            double ds = (lo == cur.left && hi == cur.right)
                            ? m
                            : stair.cumulative(hi) - stair.cumulative(lo);
            leaf(lo, hi, ds);
            return;
        }
        const Interval& base = stair.spec().base();
        double scale = cur.length() / base.length();
        const auto& maps = stair.spec().maps();
        for (std::size_t i = 0; i < maps.size(); ++i) {
            Interval img = maps[i].image(base);
            Interval child{cur.left + (img.left - base.left) * scale,
                           cur.left + (img.right - base.left) * scale};
            walk(child, m * stair.weights()[i], level + 1);
        }
    }
};

}  // namespace

IntegralBounds f_alpha_integral(const SampledFn& f, const Staircase& stair, double a,
                                double b, int depth) {
    if (!(a < b)) throw ArgumentError("f_alpha_integral: requires a < b");
    if (depth < 0 || depth > 24) {
        throw ArgumentError("f_alpha_integral: depth outside [0, 24]");
    }
    IntegralWalker walker{f, stair, a, b, depth};
    walker.walk(stair.spec().base(), stair.total_mass(), 0);
    return {walker.lower, walker.upper};
}

IntegralBounds f_alpha_integral_to_tol(const SampledFn& f, const Staircase& stair,
                                       double a, double b, double tol, int max_depth) {
    if (!(tol > 0.0)) throw ArgumentError("f_alpha_integral_to_tol: tol must be positive");
    IntegralBounds bounds;
    for (int depth = 4; depth <= max_depth; depth += 2) {
        bounds = f_alpha_integral(f, stair, a, b, depth);
        if (bounds.width() <= tol) return bounds;
    }
    throw ConvergenceError("f_alpha_integral: bracket width above tolerance at max depth",
                           {bounds.lower, bounds.upper});
}

namespace {

template <typename Fn>
auto with_entry_context(std::size_t i, std::size_t j, Fn&& fn) {
    try {
        return fn();
    } catch (const Error& e) {
        std::ostringstream msg;
        msg << "entry (" << i << ", " << j << "): " << e.what();
        throw NumericError(msg.str());
    }
}

}  // namespace

std::vector<std::vector<double>> matrix_derivative(const FractalMatrixFn& A,
                                                   const Staircase& stair, double x,
                                                   const DerivOptions& options) {
    std::vector<std::vector<double>> out(A.rows, std::vector<double>(A.cols, 0.0));
    for (std::size_t i = 0; i < A.rows; ++i) {
        for (std::size_t j = 0; j < A.cols; ++j) {
            out[i][j] = with_entry_context(i, j, [&] {
                return f_alpha_derivative(A.at(i, j), stair, x, options).value;
            });
        }
    }
    return out;
}

std::pair<std::vector<std::vector<double>>, std::vector<std::vector<double>>>
matrix_integral(const FractalMatrixFn& A, const Staircase& stair, double a, double b,
                int depth) {
    std::vector<std::vector<double>> lower(A.rows, std::vector<double>(A.cols, 0.0));
    std::vector<std::vector<double>> upper = lower;
    for (std::size_t i = 0; i < A.rows; ++i) {
        for (std::size_t j = 0; j < A.cols; ++j) {
            IntegralBounds bounds = with_entry_context(
                i, j, [&] { return f_alpha_integral(A.at(i, j), stair, a, b, depth); });
            lower[i][j] = bounds.lower;
            upper[i][j] = bounds.upper;
        }
    }
    return {lower, upper};
}

}  // namespace falpha
