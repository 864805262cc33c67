#ifndef TWRC_REGION_HPP
#define TWRC_REGION_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "twrc/channel.hpp"

namespace twrc {

/// One halfplane a*R1 + b*R2 <= c with a, b in {-1, 0, 1} and c finite.
/// Infinite bounds are never stored; R1 >= 0 and R2 >= 0 are implicit.
struct LinearConstraint {
    int a = 0;
    int b = 0;
    double c = 0.0;

    double eval(const RatePair& p) const { return a * p.r1 + b * p.r2; }

    friend bool operator==(const LinearConstraint&, const LinearConstraint&) = default;
};

/// A scheme's rate region at fixed scheme parameters: a small convex
/// polygon in the nonnegative quadrant. Capacity is 8 halfplanes, which
/// covers every constructor in this library with room to spare.
class RateRegion {
public:
    static constexpr std::size_t kMaxConstraints = 8;

    RateRegion() = default;

    /// Adds a constraint; exact duplicates (a, b, c) are dropped.
    void add(int a, int b, double c) {
        if (a == 0 && b == 0) throw region_error("constraint has (a,b) == (0,0)");
        if (a < -1 || a > 1 || b < -1 || b > 1)
            throw region_error("constraint coefficients must be in {-1,0,1}");
        if (!std::isfinite(c)) throw region_error("constraint bound must be finite");
        LinearConstraint lc{a, b, c};
        for (std::size_t i = 0; i < size_; ++i)
            if (constraints_[i] == lc) return;
        if (size_ == kMaxConstraints) throw region_error("too many constraints");
        constraints_[size_++] = lc;
    }

    std::span<const LinearConstraint> constraints() const {
        return {constraints_.data(), size_};
    }

    std::size_t size() const { return size_; }

    /// Membership with slack: every stored constraint plus nonnegativity.
    bool contains(const RatePair& p, double tol = 1e-9) const {
        if (p.r1 < -tol || p.r2 < -tol) return false;
        for (std::size_t i = 0; i < size_; ++i)
            if (constraints_[i].eval(p) > constraints_[i].c + tol) return false;
        return true;
    }

private:
    std::array<LinearConstraint, kMaxConstraints> constraints_{};
    std::size_t size_ = 0;
};

struct SumRateMax {
    double value = 0.0;
    RatePair argmax{};
};

namespace detail {

// Line a*x + b*y = c used for pairwise intersection; the two axes are
// appended to the stored constraints before enumeration.
struct Line {
    double a, b, c;
};

constexpr double kFeasTol = 1e-9;
constexpr double kParallelTol = 1e-12;

inline std::size_t collect_lines(const RateRegion& region,
                                 std::array<Line, RateRegion::kMaxConstraints + 2>& lines) {
    std::size_t n = 0;
    for (const auto& lc : region.constraints())
        lines[n++] = Line{static_cast<double>(lc.a), static_cast<double>(lc.b), lc.c};
    lines[n++] = Line{1.0, 0.0, 0.0};  // R1 = 0
    lines[n++] = Line{0.0, 1.0, 0.0};  // R2 = 0
    return n;
}

inline bool feasible(const RateRegion& region, double x, double y) {
    if (x < -kFeasTol || y < -kFeasTol) return false;
    for (const auto& lc : region.constraints())
        if (lc.a * x + lc.b * y > lc.c + kFeasTol) return false;
    return true;
}

// The recession cone of {R >= 0, aR1 + bR2 <= c} is {d >= 0, a d1 + b d2 <= 0}.
// With coefficients in {-1,0,1} its extreme rays can only be (1,0), (0,1) or
// (1,1), and any nonzero recession direction makes the sum rate unbounded.
inline bool sum_rate_bounded(const RateRegion& region) {
    constexpr double rays[3][2] = {{1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}};
    for (const auto& ray : rays) {
        bool escapes = true;
        for (const auto& lc : region.constraints()) {
            if (lc.a * ray[0] + lc.b * ray[1] > 0.0) {
                escapes = false;
                break;
            }
        }
        if (escapes) return false;
    }
    return true;
}

// Visits every feasible vertex (pairwise line intersections, coordinates
// clamped into the quadrant). Visitor: void(double x, double y).
template <class Visitor>
void for_each_vertex(const RateRegion& region, Visitor&& visit) {
    std::array<Line, RateRegion::kMaxConstraints + 2> lines;
    const std::size_t n = collect_lines(region, lines);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const Line& u = lines[i];
            const Line& v = lines[j];
            const double det = u.a * v.b - v.a * u.b;
            if (std::abs(det) < kParallelTol) continue;
            const double x = (u.c * v.b - v.c * u.b) / det;
            const double y = (u.a * v.c - v.a * u.c) / det;
            if (!feasible(region, x, y)) continue;
            visit(x < 0.0 ? 0.0 : x, y < 0.0 ? 0.0 : y);
        }
    }
}

}  // namespace detail

/// Maximizes R1 + R2 over the region by enumerating vertices.
/// Deterministic tie-break: lexicographically largest (R1, R2).
/// Throws region_error when the sum rate is unbounded or the region is empty.
inline SumRateMax max_sum_rate(const RateRegion& region) {
    if (!detail::sum_rate_bounded(region))
        throw region_error("rate region has unbounded sum rate");
    constexpr double kTie = 1e-12;
    bool found = false;
    SumRateMax best{-std::numeric_limits<double>::infinity(), {}};
    detail::for_each_vertex(region, [&](double x, double y) {
        const double s = x + y;
        const bool better =
            s > best.value + kTie ||
            (s > best.value - kTie &&
             (x > best.argmax.r1 || (x == best.argmax.r1 && y > best.argmax.r2)));
        if (!found || better) {
            found = true;
            best.value = s > best.value ? s : best.value;
            best.argmax = {x, y};
        }
    });
    if (!found) throw region_error("rate region is empty");
    best.value = best.argmax.r1 + best.argmax.r2;
    return best;
}

/// Largest feasible R1 (the frontier's rightmost target).
inline double max_rate1(const RateRegion& region) {
    if (!detail::sum_rate_bounded(region))
        throw region_error("rate region has unbounded sum rate");
    bool found = false;
    double best = 0.0;
    detail::for_each_vertex(region, [&](double x, double) {
        if (!found || x > best) best = x;
        found = true;
    });
    if (!found) throw region_error("rate region is empty");
    return best;
}

/// Largest R2 with R1 fixed at r1, or nullopt when the slice is infeasible.
inline std::optional<double> slice_max_r2(const RateRegion& region, double r1) {
    constexpr double tol = detail::kFeasTol;
    if (r1 < -tol) return std::nullopt;
    double ub = std::numeric_limits<double>::infinity();
    double lb = 0.0;
    for (const auto& lc : region.constraints()) {
        const double rem = lc.c - lc.a * r1;
        if (lc.b > 0) {
            ub = std::min(ub, rem);
        } else if (lc.b < 0) {
            lb = std::max(lb, -rem);
        } else if (rem < -tol) {
            return std::nullopt;  // a*r1 <= c violated
        }
    }
    if (std::isinf(ub)) throw region_error("rate region has unbounded sum rate");
    if (ub < lb - tol) return std::nullopt;
    return clamp_plus(ub);
}

/// Feasible vertex set, deduplicated; for tests and diagnostics.
inline std::vector<RatePair> vertices(const RateRegion& region) {
    std::vector<RatePair> out;
    detail::for_each_vertex(region, [&](double x, double y) {
        for (const auto& v : out)
            if (std::abs(v.r1 - x) < 1e-12 && std::abs(v.r2 - y) < 1e-12) return;
        out.push_back({x, y});
    });
    return out;
}

}  // namespace twrc

#endif  // TWRC_REGION_HPP
