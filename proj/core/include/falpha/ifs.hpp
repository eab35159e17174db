#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "falpha/errors.hpp"

namespace falpha {

// Closed interval [left, right] on the real line.
struct Interval {
    double left = 0.0;
    double right = 0.0;

    double length() const noexcept { return right - left; }
    bool contains(double x) const noexcept { return left <= x && x <= right; }
};

// Orientation-preserving affine contraction x -> ratio*x + offset, ratio in (0,1).
struct AffineMap {
    double ratio = 0.0;
    double offset = 0.0;

    double operator()(double x) const noexcept { return ratio * x + offset; }
    Interval image(const Interval& iv) const noexcept {
        return {(*this)(iv.left), (*this)(iv.right)};
    }
    // Fixed point offset/(1-ratio); lies in the attractor.
    double fixed_point() const noexcept { return offset / (1.0 - ratio); }
};

struct IfsLimits {
    int max_depth = 40;
    std::uint64_t max_interval_count = std::uint64_t{1} << 24;
};

// A Cantor-like subset of the line described exactly as the attractor of a
// finite affine iterated function system whose map images have disjoint
// interiors. The base interval is normalized at construction to the convex
// hull of the attractor, so every interval endpoint of every depth is a point
// of the set (construction endpoints persist through all refinements).
class IfsSpec {
public:
    IfsSpec(Interval base, std::vector<AffineMap> maps);

    const Interval& base() const noexcept { return base_; }
    const std::vector<AffineMap>& maps() const noexcept { return maps_; }
    std::size_t map_count() const noexcept { return maps_.size(); }

    // Root of sum_i ratio_i^alpha = 1; derived metadata, in (0, 1].
    double similarity_dimension() const noexcept { return similarity_dimension_; }

    // Absolute tolerance used by membership and flag queries.
    double tolerance() const noexcept { return 1e-12 * base_.length(); }

    // The classic middle-third Cantor set on [0, 1].
    static IfsSpec middle_third_cantor();
    // Two maps with the given ratio, images anchored at the interval ends.
    static IfsSpec symmetric_pair(double ratio, Interval base = {0.0, 1.0});
    // Tiling of [a, b] by two half-scale copies; the attractor is the whole
    // interval (gamma-dimension 1). Degenerate carrier used for testing the
    // reduction to ordinary calculus.
    static IfsSpec full_interval(Interval base = {0.0, 1.0});

private:
    Interval base_;
    std::vector<AffineMap> maps_;
    double similarity_dimension_ = 0.0;
};

struct FlagValue {
    int value = 0;  // 1 iff the query interval meets the approximated set
};

// Depth-k finite union of disjoint closed intervals covering the attractor.
class IntervalApprox {
public:
    IntervalApprox(IfsSpec source, int depth, std::vector<Interval> intervals)
        : source_(std::move(source)), depth_(depth), intervals_(std::move(intervals)) {}

    int depth() const noexcept { return depth_; }
    const std::vector<Interval>& intervals() const noexcept { return intervals_; }
    const IfsSpec& source() const noexcept { return source_; }

private:
    IfsSpec source_;
    int depth_ = 0;
    std::vector<Interval> intervals_;
};

struct Location {
    enum class Kind { Inside, Gap, LeftOfAll, RightOfAll };
    Kind kind = Kind::LeftOfAll;
    // Inside: the interval index. Gap: index of the interval left of the gap
    // (the gap lies between index and index+1). Unused otherwise.
    std::size_t index = 0;
};

// All images of the base interval under length-`depth` map compositions,
// sorted by left endpoint. Depth 0 is the base interval itself.
IntervalApprox build_approximation(const IfsSpec& spec, int depth,
                                   const IfsLimits& limits = {});

// Flag function: 1 iff the query interval intersects some retained interval
// (inflated by the spec tolerance). Degenerate point queries allowed.
FlagValue flag(const IntervalApprox& approx, const Interval& query);

Location locate(const IntervalApprox& approx, double t);

// True iff x lies in a retained interval at every level down to `depth`
// (within the spec tolerance); a digit-descent membership test that does not
// materialize intervals.
bool in_attractor(const IfsSpec& spec, double x, int depth);

// Nearest attractor point to x at distance comparable to `scale`: descends the
// construction tree along x until the covering interval is shorter than
// `scale` and returns its farther endpoint. Requires in_attractor(spec, x, ...).
double attractor_point_near(const IfsSpec& spec, double x, double scale);

// Construction interval covering x after descending exactly `level` levels
// along x's digits (stops early if x falls into a gap). Both endpoints are
// points of the attractor.
Interval covering_interval(const IfsSpec& spec, double x, int level);

// Endpoints of the depth-`depth` approximation, deduplicated and evenly
// subsampled down to at most `count` points. Guaranteed points of the set;
// the default sampling grid for verification.
std::vector<double> construction_points(const IfsSpec& spec, int depth,
                                        std::size_t count);

}  // namespace falpha
