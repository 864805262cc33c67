#ifndef TWRC_OPTIMIZER_HPP
#define TWRC_OPTIMIZER_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <variant>
#include <vector>

#include "twrc/channel.hpp"
#include "twrc/region.hpp"
#include "twrc/schemes.hpp"

namespace twrc {

/// Deterministic grid-then-refine search over the scheme parameter boxes.
/// Objectives carry clamps and min() kinks, so a dense scan beats gradient
/// methods at these box sizes; accuracy is limited by the final grid pitch.
struct SearchConfig {
    int coarse_grid = 201;       // points per parameter axis
    int refine_iters = 3;        // local refinement passes
    double refine_shrink = 0.1;  // box width factor per pass
    double tol = 1e-6;           // early stop when a pass improves less than this

    friend bool operator==(const SearchConfig&, const SearchConfig&) = default;
};

inline void validate(const SearchConfig& cfg) {
    if (cfg.coarse_grid < 2) throw validation_error("coarse_grid must be >= 2");
    if (cfg.refine_iters < 0) throw validation_error("refine_iters must be >= 0");
    if (!(cfg.refine_shrink > 0.0 && cfg.refine_shrink < 1.0))
        throw validation_error("refine_shrink must be in (0, 1)");
    if (!(cfg.tol > 0.0)) throw validation_error("tol must be > 0");
}

using SchemeParamsVariant = std::variant<std::monostate, NestedParams, RsSimParams, TdmParams>;

struct SchemeResult {
    Scheme scheme = Scheme::CDF;
    double sum_rate = 0.0;
    SchemeParamsVariant best_params{};
    RatePair argmax{};
    bool swapped = false;  // roles exchanged before optimizing; reported in user order
};

namespace detail {

struct Interval {
    double lo = 0.0, hi = 1.0;

    double at(int i, int n) const {
        // i == n-1 lands exactly on hi, so box corners stay representable.
        return lo + (hi - lo) * (static_cast<double>(i) / (n - 1));
    }
    Interval shrink_around(double center, double factor) const {
        const double half = 0.5 * factor * (hi - lo);
        return {std::max(0.0, center - half), std::min(1.0, center + half)};
    }
};

struct Best1D {
    double x = 0.0;
    double value = -std::numeric_limits<double>::infinity();
};

struct Best2D {
    double x = 0.0, y = 0.0;
    double value = -std::numeric_limits<double>::infinity();
};

// Ascending scans with strict-improvement updates keep the argmax at the
// lexicographically smallest maximizer, independent of evaluation order
// chunking.
template <class F>
Best1D scan_1d(F&& f, const Interval& box, int n) {
    Best1D best;
    for (int i = 0; i < n; ++i) {
        const double x = box.at(i, n);
        const double v = f(x);
        if (v > best.value) best = {x, v};
    }
    return best;
}

template <class F>
Best2D scan_2d(F&& f, const Interval& bx, const Interval& by, int n) {
    Best2D best;
    for (int i = 0; i < n; ++i) {
        const double x = bx.at(i, n);
        for (int j = 0; j < n; ++j) {
            const double y = by.at(j, n);
            const double v = f(x, y);
            if (v > best.value) best = {x, y, v};
        }
    }
    return best;
}

template <class F>
Best1D search_1d(F&& f, const SearchConfig& cfg) {
    Interval box;
    Best1D best = scan_1d(f, box, cfg.coarse_grid);
    double width = 1.0;
    for (int pass = 0; pass < cfg.refine_iters; ++pass) {
        width *= cfg.refine_shrink;
        box = Interval{}.shrink_around(best.x, width);
        const Best1D refined = scan_1d(f, box, cfg.coarse_grid);
        const double gain = refined.value - best.value;
        if (refined.value > best.value) best = refined;
        if (gain < cfg.tol) break;
    }
    return best;
}

template <class F>
Best2D search_2d(F&& f, const SearchConfig& cfg) {
    Interval bx, by;
    Best2D best = scan_2d(f, bx, by, cfg.coarse_grid);
    double width = 1.0;
    for (int pass = 0; pass < cfg.refine_iters; ++pass) {
        width *= cfg.refine_shrink;
        bx = Interval{}.shrink_around(best.x, width);
        by = Interval{}.shrink_around(best.y, width);
        const Best2D refined = scan_2d(f, bx, by, cfg.coarse_grid);
        const double gain = refined.value - best.value;
        if (refined.value > best.value) best = refined;
        if (gain < cfg.tol) break;
    }
    return best;
}

}  // namespace detail

/// Maximizes the sum rate over the scheme's free parameters. CDF and the
/// outer bound have none and reduce to a single polygon maximization.
/// For the rate-splitting schemes a p2 > p1 input is silently reoriented;
/// the result (argmax included) is reported in the caller's user order
/// with swapped = true.
inline SchemeResult optimize_sum_rate(Scheme scheme, const ChannelParams& params,
                                      const SearchConfig& cfg = {}) {
    validate(params);
    validate(cfg);

    ChannelParams p = params;
    bool swapped = false;
    if (needs_orientation(scheme) && p.p2 > p.p1) {
        p = swap_roles(p);
        swapped = true;
    }

    SchemeResult result;
    result.scheme = scheme;
    result.swapped = swapped;

    switch (scheme) {
        case Scheme::OuterBound:
        case Scheme::CDF: {
            const auto m = max_sum_rate(scheme_region(scheme, p));
            result.sum_rate = m.value;
            result.argmax = m.argmax;
            break;
        }
        case Scheme::FdfNested: {
            const auto best = detail::search_2d(
                [&](double d1, double d2) {
                    return max_sum_rate(fdf_nested_region(p, {d1, d2})).value;
                },
                cfg);
            const auto m = max_sum_rate(fdf_nested_region(p, {best.x, best.y}));
            result.sum_rate = m.value;
            result.argmax = m.argmax;
            result.best_params = NestedParams{best.x, best.y};
            break;
        }
        case Scheme::FdfRsSim: {
            const auto best = detail::search_2d(
                [&](double e1, double e2) {
                    return max_sum_rate(fdf_rs_sim_region(p, {e1, e2})).value;
                },
                cfg);
            const auto m = max_sum_rate(fdf_rs_sim_region(p, {best.x, best.y}));
            result.sum_rate = m.value;
            result.argmax = m.argmax;
            result.best_params = RsSimParams{best.x, best.y};
            break;
        }
        case Scheme::FdfRsTdm: {
            const auto best = detail::search_1d(
                [&](double a) { return max_sum_rate(fdf_rs_tdm_region(p, {a})).value; },
                cfg);
            const auto m = max_sum_rate(fdf_rs_tdm_region(p, {best.x}));
            result.sum_rate = m.value;
            result.argmax = m.argmax;
            result.best_params = TdmParams{best.x};
            break;
        }
    }

    if (swapped) std::swap(result.argmax.r1, result.argmax.r2);
    return result;
}

/// Traces (R1_target, max R2) over n_points targets spanning [0, max R1],
/// maximizing over scheme parameters per target. No time-sharing closure
/// across parameter points. Reported in the caller's user order (targets
/// sweep the swapped axis when roles were exchanged).
inline std::vector<RatePair> pareto_frontier(Scheme scheme, const ChannelParams& params,
                                             const SearchConfig& cfg, int n_points) {
    validate(params);
    validate(cfg);
    if (n_points < 2) throw validation_error("n_points must be >= 2");

    ChannelParams p = params;
    bool swapped = false;
    if (needs_orientation(scheme) && p.p2 > p.p1) {
        p = swap_roles(p);
        swapped = true;
    }

    constexpr double kInf = std::numeric_limits<double>::infinity();
    const bool parametrized =
        scheme == Scheme::FdfNested || scheme == Scheme::FdfRsSim || scheme == Scheme::FdfRsTdm;

    auto region_at = [&](double x, double y) {
        switch (scheme) {
            case Scheme::FdfNested: return fdf_nested_region(p, {x, y});
            case Scheme::FdfRsSim: return fdf_rs_sim_region(p, {x, y});
            case Scheme::FdfRsTdm: return fdf_rs_tdm_region(p, {x});
            default: return scheme_region(scheme, p);
        }
    };

    // Rightmost target from the coarse grid only, so every target stays
    // reachable by at least one grid point of the per-target search below.
    double r1_max = 0.0;
    if (!parametrized) {
        r1_max = max_rate1(scheme_region(scheme, p));
    } else if (scheme == Scheme::FdfRsTdm) {
        const auto b = detail::scan_1d(
            [&](double a) { return max_rate1(region_at(a, 0.0)); }, detail::Interval{},
            cfg.coarse_grid);
        r1_max = b.value;
    } else {
        const auto b = detail::scan_2d(
            [&](double x, double y) { return max_rate1(region_at(x, y)); },
            detail::Interval{}, detail::Interval{}, cfg.coarse_grid);
        r1_max = b.value;
    }

    std::vector<RatePair> frontier;
    frontier.reserve(static_cast<std::size_t>(n_points));
    for (int k = 0; k < n_points; ++k) {
        const double target = r1_max * (static_cast<double>(k) / (n_points - 1));
        auto slice = [&](double x, double y) {
            const auto r2 = slice_max_r2(region_at(x, y), target);
            return r2 ? *r2 : -kInf;
        };
        double best = -kInf;
        if (!parametrized) {
            best = slice(0.0, 0.0);
        } else if (scheme == Scheme::FdfRsTdm) {
            best = detail::search_1d([&](double a) { return slice(a, 0.0); }, cfg).value;
        } else {
            best = detail::search_2d(slice, cfg).value;
        }
        RatePair pt{target, best > 0.0 ? best : 0.0};
        if (swapped) std::swap(pt.r1, pt.r2);
        frontier.push_back(pt);
    }
    return frontier;
}

/// One grid cell of the best-scheme map: optimized sums for the four
/// achievable schemes, the tie set within tie_tol of the best, and the
/// gap to the best scheme outside the tie set.
struct WinnerCell {
    double snr1 = 0.0;
    double snr2 = 0.0;
    double sums[4] = {0.0, 0.0, 0.0, 0.0};  // indexed like kAchievableSchemes
    std::vector<Scheme> winners{};
    double margin = 0.0;

    double sum_of(Scheme s) const {
        for (int i = 0; i < 4; ++i)
            if (kAchievableSchemes[i] == s) return sums[i];
        throw validation_error("outer bound has no winner-map column");
    }
};

/// Compares the four achievable schemes at one channel configuration.
/// tie_tol should match the search resolution (1e-4 for searched optima).
inline WinnerCell winner_at(const ChannelParams& params, const SearchConfig& cfg = {},
                            double tie_tol = 1e-4) {
    if (!(tie_tol > 0.0)) throw validation_error("tie_tol must be > 0");
    WinnerCell cell;
    cell.snr1 = params.p1 / params.n0;
    cell.snr2 = params.p2 / params.n0;
    for (int i = 0; i < 4; ++i)
        cell.sums[i] = optimize_sum_rate(kAchievableSchemes[i], params, cfg).sum_rate;
    const double best = *std::max_element(std::begin(cell.sums), std::end(cell.sums));
    double runner_up = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < 4; ++i) {
        if (cell.sums[i] >= best - tie_tol)
            cell.winners.push_back(kAchievableSchemes[i]);
        else
            runner_up = std::max(runner_up, cell.sums[i]);
    }
    cell.margin = std::isinf(runner_up) ? 0.0 : best - runner_up;
    return cell;
}

}  // namespace twrc

#endif  // TWRC_OPTIMIZER_HPP
