#ifndef TWRC_SCHEMES_HPP
#define TWRC_SCHEMES_HPP

#include <algorithm>
#include <string>
#include <string_view>

#include "twrc/channel.hpp"
#include "twrc/region.hpp"

namespace twrc {

enum class Scheme { OuterBound, CDF, FdfNested, FdfRsSim, FdfRsTdm };

/// The four achievable schemes, in canonical (display-precedence) order.
inline constexpr Scheme kAchievableSchemes[] = {Scheme::CDF, Scheme::FdfNested,
                                                Scheme::FdfRsSim, Scheme::FdfRsTdm};

inline std::string_view scheme_label(Scheme s) {
    switch (s) {
        case Scheme::OuterBound: return "OuterBound";
        case Scheme::CDF: return "CDF";
        case Scheme::FdfNested: return "FdfNested";
        case Scheme::FdfRsSim: return "FdfRsSim";
        case Scheme::FdfRsTdm: return "FdfRsTdm";
    }
    return "?";
}

inline std::string_view scheme_cli_name(Scheme s) {
    switch (s) {
        case Scheme::OuterBound: return "outer_bound";
        case Scheme::CDF: return "cdf";
        case Scheme::FdfNested: return "fdf_nested";
        case Scheme::FdfRsSim: return "fdf_rs_sim";
        case Scheme::FdfRsTdm: return "fdf_rs_tdm";
    }
    return "?";
}

inline Scheme parse_scheme(std::string_view name) {
    for (Scheme s : {Scheme::OuterBound, Scheme::CDF, Scheme::FdfNested,
                     Scheme::FdfRsSim, Scheme::FdfRsTdm})
        if (name == scheme_cli_name(s) || name == scheme_label(s)) return s;
    throw validation_error("unknown scheme: " + std::string(name));
}

/// True for the rate-splitting schemes, which assume p1 >= p2.
inline bool needs_orientation(Scheme s) {
    return s == Scheme::FdfRsSim || s == Scheme::FdfRsTdm;
}

// ---------------------------------------------------------------------------
// Scheme parameters

/// Power scale-back fractions for the nested-lattice scheme: user i
/// transmits at delta_i * P_i.
struct NestedParams {
    double delta1 = 1.0;
    double delta2 = 1.0;

    friend bool operator==(const NestedParams&, const NestedParams&) = default;
};

/// Rate splitting with simultaneous transmission: both users spend eta2*P2
/// on the shared lattice code; user 1 spends a fraction eta1 of its
/// remaining power on the Gaussian code.
struct RsSimParams {
    double eta1 = 0.0;
    double eta2 = 1.0;

    friend bool operator==(const RsSimParams&, const RsSimParams&) = default;
};

/// Rate splitting with time division: lattice phase occupies a fraction
/// alpha of the channel uses.
struct TdmParams {
    double alpha = 1.0;

    friend bool operator==(const TdmParams&, const TdmParams&) = default;
};

namespace detail {

inline void check_fraction(double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0))
        throw validation_error(std::string(name) + " must be in [0, 1]");
}

inline void require_oriented(const ChannelParams& p) {
    if (p.p1 < p.p2)
        throw orientation_error("rate-splitting schemes assume p1 >= p2; swap user roles");
}

inline void add_downlink_caps(RateRegion& region, const ChannelParams& p) {
    if (!p.downlink) return;
    region.add(1, 0, capacity_c(p.downlink->p0 / p.downlink->n2));
    region.add(0, 1, capacity_c(p.downlink->p0 / p.downlink->n1));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Region constructors. All take validated channel parameters.

/// Cut-set outer bound: R1 <= min{C(P1/N0), C(P0/N2)},
/// R2 <= min{C(P2/N0), C(P0/N1)}. Downlink terms drop out when inactive.
inline RateRegion outer_bound_region(const ChannelParams& p) {
    double b1 = capacity_c(p.p1 / p.n0);
    double b2 = capacity_c(p.p2 / p.n0);
    if (p.downlink) {
        b1 = std::min(b1, capacity_c(p.downlink->p0 / p.downlink->n2));
        b2 = std::min(b2, capacity_c(p.downlink->p0 / p.downlink->n1));
    }
    RateRegion region;
    region.add(1, 0, b1);
    region.add(0, 1, b2);
    return region;
}

/// Complete-decode-forward: the relay decodes both messages, so the uplink
/// is a multiple-access channel with the usual individual and sum constraints.
inline RateRegion cdf_region(const ChannelParams& p) {
    RateRegion region;
    region.add(1, 0, capacity_c(p.p1 / p.n0));
    region.add(0, 1, capacity_c(p.p2 / p.n0));
    region.add(1, 1, capacity_c((p.p1 + p.p2) / p.n0));
    detail::add_downlink_caps(region, p);
    return region;
}

/// Functional-decode-forward with nested lattice codes, user i transmitting
/// at delta_i * P_i:
///   R_i <= [ 1/2 log2( d_i P_i / (d_1 P_1 + d_2 P_2) + d_i P_i / N0 ) ]+
/// Zero combined lattice power yields the degenerate region {(0, 0)}.
inline RateRegion fdf_nested_region(const ChannelParams& p, const NestedParams& np) {
    detail::check_fraction(np.delta1, "delta1");
    detail::check_fraction(np.delta2, "delta2");
    const double s1 = np.delta1 * p.p1;
    const double s2 = np.delta2 * p.p2;
    const double total = s1 + s2;
    double b1 = 0.0, b2 = 0.0;
    if (total > 0.0) {
        b1 = half_log2_clamped(s1 / total + s1 / p.n0);
        b2 = half_log2_clamped(s2 / total + s2 / p.n0);
    }
    RateRegion region;
    region.add(1, 0, b1);
    region.add(0, 1, b2);
    detail::add_downlink_caps(region, p);
    return region;
}

/// Functional-decode-forward with rate splitting, both codes sent
/// simultaneously. The lattice decoding bound carries the 1/2 + SNR
/// constant (not 1 + SNR), with the Gaussian codeword acting as extra
/// noise of power eta1*(P1 - eta2*P2). Requires p1 >= p2.
inline RateRegion fdf_rs_sim_region(const ChannelParams& p, const RsSimParams& rp) {
    detail::check_fraction(rp.eta1, "eta1");
    detail::check_fraction(rp.eta2, "eta2");
    detail::require_oriented(p);
    const double gaussian_power = rp.eta1 * (p.p1 - rp.eta2 * p.p2);
    const double lattice_bound =
        half_log2_clamped(0.5 + rp.eta2 * p.p2 / (p.n0 + gaussian_power));
    RateRegion region;
    region.add(0, 1, lattice_bound);
    region.add(1, -1, capacity_c(gaussian_power / p.n0));
    region.add(-1, 1, 0.0);  // split message carries n(R1 - R2) >= 0 bits
    detail::add_downlink_caps(region, p);
    return region;
}

/// Functional-decode-forward with rate splitting over two phases: a lattice
/// phase of fraction alpha at power P2/alpha, then an interference-free
/// Gaussian phase at power (P1 - P2)/(1 - alpha). Endpoints are the
/// continuous limits: alpha = 0 kills the lattice bound, alpha = 1 the
/// Gaussian one. Requires p1 >= p2.
inline RateRegion fdf_rs_tdm_region(const ChannelParams& p, const TdmParams& tp) {
    detail::check_fraction(tp.alpha, "alpha");
    detail::require_oriented(p);
    const double a = tp.alpha;
    double lattice_bound = 0.0;
    if (a > 0.0)
        lattice_bound = clamp_plus(0.5 * a * std::log2(0.5 + p.p2 / (a * p.n0)));
    double gaussian_bound = 0.0;
    if (a < 1.0)
        gaussian_bound = (1.0 - a) * capacity_c((p.p1 - p.p2) / ((1.0 - a) * p.n0));
    RateRegion region;
    region.add(0, 1, lattice_bound);
    region.add(1, -1, gaussian_bound);
    region.add(-1, 1, 0.0);
    detail::add_downlink_caps(region, p);
    return region;
}

/// Region for `scheme` at the given parameter point; nested/RS parameter
/// records that do not apply to the scheme are ignored.
inline RateRegion scheme_region(Scheme scheme, const ChannelParams& p,
                                const NestedParams& np = {}, const RsSimParams& rp = {},
                                const TdmParams& tp = {}) {
    switch (scheme) {
        case Scheme::OuterBound: return outer_bound_region(p);
        case Scheme::CDF: return cdf_region(p);
        case Scheme::FdfNested: return fdf_nested_region(p, np);
        case Scheme::FdfRsSim: return fdf_rs_sim_region(p, rp);
        case Scheme::FdfRsTdm: return fdf_rs_tdm_region(p, tp);
    }
    throw validation_error("unknown scheme enum value");
}

}  // namespace twrc

#endif  // TWRC_SCHEMES_HPP
