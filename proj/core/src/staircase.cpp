#include "falpha/staircase.hpp"

#include <cmath>
#include <limits>

namespace falpha {

Staircase::Staircase(IfsSpec spec, double alpha, double anchor, double total_mass,
                     int evaluation_depth)
    : spec_(std::move(spec)),
      alpha_(alpha),
      anchor_(anchor),
      total_mass_(total_mass),
      evaluation_depth_(evaluation_depth) {
    if (!(alpha_ > 0.0 && alpha_ <= 1.0)) {
        throw ArgumentError("staircase: alpha must lie in (0, 1]");
    }
    if (!(total_mass_ >= 0.0) || !std::isfinite(total_mass_)) {
        throw ArgumentError("staircase: total mass must be finite and nonnegative");
    }
    if (evaluation_depth_ < 1) {
        throw ArgumentError("staircase: evaluation depth must be positive");
    }
    double s_alpha = 0.0;
    for (const auto& m : spec_.maps()) s_alpha += std::pow(m.ratio, alpha_);
    for (const auto& m : spec_.maps()) {
        weights_.push_back(std::pow(m.ratio, alpha_) / s_alpha);
        images_.push_back(m.image(spec_.base()));
    }
    anchor_mass_ = cumulative(anchor_);
}

double Staircase::cumulative(double x) const {
    const Interval& base = spec_.base();
    if (x <= base.left) return 0.0;
    if (x >= base.right) return total_mass_;
    Interval cur = base;
    double acc = 0.0;
    double m = total_mass_;
    const double eps = std::numeric_limits<double>::epsilon();
    for (int level = 0; level < evaluation_depth_; ++level) {
        // Below the spacing of representable doubles the children collapse
        // and branch selection becomes rounding noise; the leaf interpolation
        // is exact there.
        if (cur.length() <=
            8.0 * eps * std::max(std::abs(cur.left), std::abs(cur.right))) {
            break;
        }
        const double scale = cur.length() / base.length();
        double left_sum = 0.0;
        bool descended = false;
        for (std::size_t i = 0; i < images_.size(); ++i) {
            Interval child{cur.left + (images_[i].left - base.left) * scale,
                           cur.left + (images_[i].right - base.left) * scale};
            if (x < child.left) {
                // In the gap before child i: gaps carry no mass.
                return acc + m * left_sum;
            }
            if (x <= child.right) {
                acc += m * left_sum;
                m *= weights_[i];
                cur = child;
                descended = true;
                break;
            }
            left_sum += weights_[i];
        }
        if (!descended) return acc + m;  // beyond the last child
    }
    double len = cur.length();
    if (!(len > 0.0)) return acc;
    return acc + m * (x - cur.left) / len;
}

double staircase_eval(const Staircase& stair, double x) {
    return stair.cumulative(x) - stair.anchor_mass();
}

Staircase make_staircase(const IfsSpec& spec, double alpha, double anchor,
                         int evaluation_depth, double mass_tol) {
    MassEstimate est = mass(spec, alpha, spec.base().left, spec.base().right, mass_tol);
    if (std::isinf(est.value)) {
        throw ArgumentError(
            "make_staircase: mass diverges at this alpha; the staircase is undefined "
            "(choose alpha at or above the gamma-dimension)");
    }
    return Staircase(spec, alpha, anchor, est.value, evaluation_depth);
}

}  // namespace falpha
