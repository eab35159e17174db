#pragma once

#include <vector>

#include "falpha/ifs.hpp"
#include "falpha/mass.hpp"

namespace falpha {

// Integral staircase S_F^alpha: cumulative mass from an anchor point a0,
// S(x) = gamma^alpha(F, a0, x) for x >= a0 and -gamma^alpha(F, x, a0)
// otherwise. Evaluation descends the construction tree, splitting mass by
// ratio_i^alpha fractions per level (gaps carry zero), down to
// evaluation_depth, then interpolates linearly inside the final interval.
// Immutable; evaluation is pure.
class Staircase {
public:
    Staircase(IfsSpec spec, double alpha, double anchor, double total_mass,
              int evaluation_depth);

    const IfsSpec& spec() const noexcept { return spec_; }
    double alpha() const noexcept { return alpha_; }
    double anchor() const noexcept { return anchor_; }
    double total_mass() const noexcept { return total_mass_; }
    int evaluation_depth() const noexcept { return evaluation_depth_; }
    // Normalized per-level mass fractions, one per map (sum 1), in map order.
    const std::vector<double>& weights() const noexcept { return weights_; }

    // Mass accumulated from the base left endpoint up to x, clamped to
    // [0, total_mass]; S(x) = cumulative(x) - cumulative(anchor).
    double cumulative(double x) const;
    double anchor_mass() const noexcept { return anchor_mass_; }

private:
    IfsSpec spec_;
    double alpha_;
    double anchor_;
    double total_mass_;
    int evaluation_depth_;
    std::vector<double> weights_;
    std::vector<Interval> images_;
    double anchor_mass_ = 0.0;
};

double staircase_eval(const Staircase& stair, double x);

// Builds the staircase anchored at `anchor` with total mass from the mass
// refinement at `alpha`. Throws ArgumentError when the mass diverges at this
// alpha (the staircase is undefined); accepts a non-converged finite estimate
// (the recursion is normalized per level, so the result stays monotone).
Staircase make_staircase(const IfsSpec& spec, double alpha, double anchor,
                         int evaluation_depth = 48, double mass_tol = 1e-12);

}  // namespace falpha
