#ifndef TWRC_ORACLE_HPP
#define TWRC_ORACLE_HPP

#include <cmath>

#include "twrc/channel.hpp"
#include "twrc/region.hpp"
#include "twrc/schemes.hpp"

namespace twrc {

/// Brute-force grid settings. Not a performance path: the oracle exists to
/// certify optimizer output and to back property tests.
struct OracleConfig {
    double step = 1e-3;       // scheme-parameter grid step
    double rate_step = 1e-3;  // rate-plane sampling step (membership sweeps)

    friend bool operator==(const OracleConfig&, const OracleConfig&) = default;
};

inline void validate(const OracleConfig& cfg) {
    if (!(cfg.step > 0.0 && cfg.step <= 0.1))
        throw validation_error("oracle step must be in (0, 0.1]");
    if (!(cfg.rate_step > 0.0 && cfg.rate_step <= 0.1))
        throw validation_error("oracle rate_step must be in (0, 0.1]");
}

namespace oracle_detail {

inline int grid_divisions(double step) {
    // Smallest n with 1/n <= step; endpoints i/n hit 0 and 1 exactly.
    return static_cast<int>(std::ceil(1.0 / step - 1e-12));
}

}  // namespace oracle_detail

/// Exhaustive sum-rate maximum over the scheme-parameter box at the given
/// grid step. Parameter-free schemes collapse to one evaluation.
inline double grid_max_sum(Scheme scheme, const ChannelParams& params,
                           const OracleConfig& cfg = {}) {
    validate(params);
    validate(cfg);
    const int n = oracle_detail::grid_divisions(cfg.step);
    double best = 0.0;
    switch (scheme) {
        case Scheme::OuterBound:
        case Scheme::CDF:
            return max_sum_rate(scheme_region(scheme, params)).value;
        case Scheme::FdfNested:
            for (int i = 0; i <= n; ++i)
                for (int j = 0; j <= n; ++j) {
                    const double v = max_sum_rate(fdf_nested_region(
                                                      params, {double(i) / n, double(j) / n}))
                                         .value;
                    if (v > best) best = v;
                }
            return best;
        case Scheme::FdfRsSim:
            for (int i = 0; i <= n; ++i)
                for (int j = 0; j <= n; ++j) {
                    const double v = max_sum_rate(fdf_rs_sim_region(
                                                      params, {double(i) / n, double(j) / n}))
                                         .value;
                    if (v > best) best = v;
                }
            return best;
        case Scheme::FdfRsTdm:
            for (int i = 0; i <= n; ++i) {
                const double v =
                    max_sum_rate(fdf_rs_tdm_region(params, {double(i) / n})).value;
                if (v > best) best = v;
            }
            return best;
    }
    throw validation_error("unknown scheme enum value");
}

/// True iff some grid point of the scheme-parameter box yields a region
/// containing the point (1e-9 slack). Params must already be oriented for
/// the rate-splitting schemes.
inline bool contains(Scheme scheme, const ChannelParams& params, const RatePair& point,
                     const OracleConfig& cfg = {}) {
    validate(params);
    validate(cfg);
    const int n = oracle_detail::grid_divisions(cfg.step);
    switch (scheme) {
        case Scheme::OuterBound:
        case Scheme::CDF:
            return scheme_region(scheme, params).contains(point);
        case Scheme::FdfNested:
            for (int i = 0; i <= n; ++i)
                for (int j = 0; j <= n; ++j)
                    if (fdf_nested_region(params, {double(i) / n, double(j) / n})
                            .contains(point))
                        return true;
            return false;
        case Scheme::FdfRsSim:
            for (int i = 0; i <= n; ++i)
                for (int j = 0; j <= n; ++j)
                    if (fdf_rs_sim_region(params, {double(i) / n, double(j) / n})
                            .contains(point))
                        return true;
            return false;
        case Scheme::FdfRsTdm:
            for (int i = 0; i <= n; ++i)
                if (fdf_rs_tdm_region(params, {double(i) / n}).contains(point)) return true;
            return false;
    }
    throw validation_error("unknown scheme enum value");
}

}  // namespace twrc

#endif  // TWRC_ORACLE_HPP
