#include "falpha/ifs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace falpha {
namespace {

void check_finite(double v, const char* what) {
    if (!std::isfinite(v)) {
        throw ArgumentError(std::string("ifs: non-finite ") + what);
    }
}

// Children of a construction interval: the base-interval map images carried
// through the affine word that produced `cur`. All descent code shares this
// arithmetic so materialized approximations and digit descent agree bit for
// bit.
inline Interval child_of(const Interval& cur, const Interval& base_image,
                         const Interval& base, double scale) {
    return {cur.left + (base_image.left - base.left) * scale,
            cur.left + (base_image.right - base.left) * scale};
}

// Containment tolerance at the current level: relative to the interval with
// an absolute floor, since construction intervals eventually shrink below the
// spacing of representable doubles.
inline double level_tolerance(const Interval& cur, const Interval& base) {
    double abs_scale = std::max({std::abs(cur.left), std::abs(cur.right), base.length()});
    return 1e-12 * cur.length() + 16.0 * std::numeric_limits<double>::epsilon() * abs_scale;
}

// Unique root of sum_i ratio_i^alpha = 1 in (0, 1]; the sum is strictly
// decreasing in alpha and >= 2 at alpha -> 0+.
double solve_similarity_dimension(const std::vector<AffineMap>& maps) {
    auto deficit = [&](double alpha) {
        double s = 0.0;
        for (const auto& m : maps) s += std::pow(m.ratio, alpha);
        return s - 1.0;
    };
    if (deficit(1.0) >= 0.0) return 1.0;
    double lo = 1e-9, hi = 1.0;
    for (int i = 0; i < 200 && (hi - lo) > 1e-16; ++i) {
        double mid = 0.5 * (lo + hi);
        (deficit(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

IfsSpec::IfsSpec(Interval base, std::vector<AffineMap> maps)
    : base_(base), maps_(std::move(maps)) {
    check_finite(base_.left, "base endpoint");
    check_finite(base_.right, "base endpoint");
    if (!(base_.left < base_.right)) {
        throw ArgumentError("ifs: base interval must satisfy a < b");
    }
    if (maps_.size() < 2) {
        throw ArgumentError("ifs: at least 2 maps required (a single map has gamma-dimension 0)");
    }
    for (const auto& m : maps_) {
        check_finite(m.ratio, "ratio");
        check_finite(m.offset, "offset");
        if (!(m.ratio > 0.0 && m.ratio < 1.0)) {
            throw ArgumentError("ifs: map ratio must lie in (0, 1)");
        }
    }
    std::sort(maps_.begin(), maps_.end(), [&](const AffineMap& a, const AffineMap& b) {
        return a.image(base_).left < b.image(base_).left;
    });
    const double tol = tolerance();
    for (std::size_t i = 0; i < maps_.size(); ++i) {
        Interval img = maps_[i].image(base_);
        if (img.left < base_.left - tol || img.right > base_.right + tol) {
            throw ArgumentError("ifs: map image escapes the base interval");
        }
        if (i > 0 && maps_[i - 1].image(base_).right > img.left + tol) {
            throw ArgumentError("ifs: map images must have disjoint interiors");
        }
    }
    // Normalize the base to the attractor's convex hull so that interval
    // endpoints of every depth are genuine points of the set. A base already
    // touching the hull (within tolerance) is kept as given.
    double hull_left = maps_.front().fixed_point();
    double hull_right = maps_.back().fixed_point();
    if (std::abs(hull_left - base_.left) > tol) base_.left = hull_left;
    if (std::abs(hull_right - base_.right) > tol) base_.right = hull_right;
    similarity_dimension_ = solve_similarity_dimension(maps_);
}

IfsSpec IfsSpec::middle_third_cantor() {
    return IfsSpec({0.0, 1.0}, {{1.0 / 3.0, 0.0}, {1.0 / 3.0, 2.0 / 3.0}});
}

IfsSpec IfsSpec::symmetric_pair(double ratio, Interval base) {
    double len = base.right - base.left;
    return IfsSpec(base, {{ratio, base.left * (1.0 - ratio)},
                          {ratio, base.left * (1.0 - ratio) + (1.0 - ratio) * len}});
}

IfsSpec IfsSpec::full_interval(Interval base) {
    return symmetric_pair(0.5, base);
}

IntervalApprox build_approximation(const IfsSpec& spec, int depth, const IfsLimits& limits) {
    if (depth < 0 || depth > limits.max_depth) {
        throw ArgumentError("build_approximation: depth outside [0, max_depth]");
    }
    std::uint64_t count = 1;
    for (int k = 0; k < depth; ++k) {
        if (count > limits.max_interval_count / spec.map_count()) {
            throw ResourceError("build_approximation: interval count cap exceeded");
        }
        count *= spec.map_count();
    }
    std::vector<Interval> images;
    images.reserve(spec.map_count());
    for (const auto& m : spec.maps()) images.push_back(m.image(spec.base()));
    std::vector<Interval> cur = {spec.base()};
    for (int k = 0; k < depth; ++k) {
        std::vector<Interval> next;
        next.reserve(cur.size() * spec.map_count());
        for (const auto& iv : cur) {
            double scale = iv.length() / spec.base().length();
            for (const auto& img : images) {
                next.push_back(child_of(iv, img, spec.base(), scale));
            }
        }
        cur = std::move(next);
    }
    return IntervalApprox(spec, depth, std::move(cur));
}

FlagValue flag(const IntervalApprox& approx, const Interval& query) {
    if (!(query.left <= query.right)) {
        throw ArgumentError("flag: malformed query interval");
    }
    const double tol = approx.source().tolerance();
    const auto& ivs = approx.intervals();
    // First interval whose (inflated) right end reaches the query.
    auto it = std::lower_bound(ivs.begin(), ivs.end(), query.left - tol,
                               [](const Interval& iv, double v) { return iv.right < v; });
    if (it == ivs.end()) return {0};
    return {it->left - tol <= query.right ? 1 : 0};
}

Location locate(const IntervalApprox& approx, double t) {
    const double tol = approx.source().tolerance();
    const auto& ivs = approx.intervals();
    if (ivs.empty() || t < ivs.front().left - tol) return {Location::Kind::LeftOfAll, 0};
    auto it = std::lower_bound(ivs.begin(), ivs.end(), t - tol,
                               [](const Interval& iv, double v) { return iv.right < v; });
    if (it == ivs.end()) return {Location::Kind::RightOfAll, 0};
    std::size_t i = static_cast<std::size_t>(it - ivs.begin());
    if (t >= it->left - tol) return {Location::Kind::Inside, i};
    return {Location::Kind::Gap, i - 1};
}

namespace {

// Shared digit descent: follows x through up to `max_levels` construction
// levels, returning the last covering interval and whether every level
// contained x.
struct Descent {
    Interval cover;
    bool contained = true;
};

Descent descend(const IfsSpec& spec, double x, int max_levels) {
    Interval cur = spec.base();
    std::vector<Interval> images;
    images.reserve(spec.map_count());
    for (const auto& m : spec.maps()) images.push_back(m.image(spec.base()));
    for (int level = 0; level < max_levels; ++level) {
        double scale = cur.length() / spec.base().length();
        double tol = level_tolerance(cur, spec.base());
        bool found = false;
        for (const auto& img : images) {
            Interval child = child_of(cur, img, spec.base(), scale);
            if (x >= child.left - tol && x <= child.right + tol) {
                cur = child;
                found = true;
                break;
            }
        }
        if (!found) return {cur, false};
    }
    return {cur, true};
}

}  // namespace

bool in_attractor(const IfsSpec& spec, double x, int depth) {
    return descend(spec, x, depth).contained;
}

double attractor_point_near(const IfsSpec& spec, double x, double scale) {
    if (!(scale > 0.0)) throw ArgumentError("attractor_point_near: scale must be positive");
    Interval cur = spec.base();
    std::vector<Interval> images;
    images.reserve(spec.map_count());
    for (const auto& m : spec.maps()) images.push_back(m.image(spec.base()));
    while (cur.length() > scale) {
        double s = cur.length() / spec.base().length();
        double tol = level_tolerance(cur, spec.base());
        bool found = false;
        for (const auto& img : images) {
            Interval child = child_of(cur, img, spec.base(), s);
            if (x >= child.left - tol && x <= child.right + tol) {
                // Children stop shrinking once the interval is a few ulps wide.
                if (child.left == cur.left && child.right == cur.right) break;
                cur = child;
                found = true;
                break;
            }
        }
        if (!found) break;  // x drifted into a gap; snap to the last cover
    }
    return (x - cur.left >= cur.right - x) ? cur.left : cur.right;
}

Interval covering_interval(const IfsSpec& spec, double x, int level) {
    return descend(spec, x, level).cover;
}

std::vector<double> construction_points(const IfsSpec& spec, int depth, std::size_t count) {
    if (count == 0) return {};
    IntervalApprox approx = build_approximation(spec, depth);
    std::vector<double> pts;
    pts.reserve(approx.intervals().size() * 2);
    for (const auto& iv : approx.intervals()) {
        if (pts.empty() || iv.left > pts.back()) pts.push_back(iv.left);
        pts.push_back(iv.right);
    }
    if (pts.size() <= count) return pts;
    std::vector<double> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        std::size_t j = (i * (pts.size() - 1)) / (count - 1 == 0 ? 1 : count - 1);
        out.push_back(pts[j]);
    }
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace falpha
